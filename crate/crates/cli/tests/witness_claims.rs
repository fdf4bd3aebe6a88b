use std::path::Path;

use rsa_cli::witness::{search, WitnessSpec};

fn witness(instance: &str, base: &[&str], target: &str) -> f64 {
    let mut q = format!("instance {instance}\nbase model\n");
    for b in base {
        q.push_str(&format!("base family {b}\n"));
    }
    q.push_str(&format!("target {target}\n"));
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let spec = WitnessSpec::parse(&q).unwrap().relative_to(&dir);
    let (r, w) = search(&spec).unwrap();
    let w = w.unwrap_or_else(|| panic!("no witness for {target} over {base:?} on {instance}"));
    for row in &r.base {
        assert!(row.violation(w.point.values()) <= 1e-7, "{}", row.tag);
    }
    assert!(w.row.violation(w.point.values()) > 1e-6);
    w.violation
}

#[test]
fn not_branch_and_exactly_vd_are_independent() {
    assert!(witness("INST-A", &["exactlyVdFromV"], "notBranchFromV") > 1e-6);
    assert!(witness("INST-A", &["notBranchFromV"], "exactlyVdFromV") > 1e-6);
    assert!(witness("INST-A", &["notBranchFromSrc"], "exactlyVdFromSrc") > 1e-6);
}

#[test]
fn antiparallel_implication_is_not_implied_by_induced_arcs() {
    let base = ["inducedArcsPerSlot", "inducedArcsSummed", "exactlyVdFromV"];
    assert!(witness("ring3.rsa", &base, "antiparallelImplication") > 1e-6);
}

#[test]
fn non_over_by_sum_and_k_demands_are_independent() {
    assert!(witness("triangle-2x2.rsa", &["nonOverBySum", "exactlyVdFromV"], "kDemandsNotExceed") > 1e-6);
    assert!(witness("ring3.rsa", &["kDemandsNotExceed", "exactlyVdFromV"], "nonOverBySum") > 1e-6);
}

#[test]
fn k_demand_forms_are_independent() {
    assert!(witness("triangle-2-1.rsa", &["kDemandsBySum", "exactlyVdFromV"], "kDemandsNotExceed") > 1e-6);
    assert!(witness("triangle-2x2.rsa", &["kDemandsNotExceed", "exactlyVdFromV"], "kDemandsBySum") > 1e-6);
}

#[test]
fn far_slots_off_is_not_implied() {
    let base = ["exactlyVdFromV", "contiguityEqs", "ppalSlotsFromSrc"];
    assert!(witness("triangle-5slots.rsa", &base, "farSlotsOff") > 1e-6);
}
