//! Oracle audits of separator output on micro instances.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsa_core::cuts::{Cut, Family, SeparationConfig, SeparationContext};
use rsa_core::model::{build_model, ModelOptions};
use rsa_core::oracle::{EnumLimits, Oracle, OracleError};
use rsa_core::{FractionalPoint, Instance};

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub family: Family,
    pub instance: String,
    pub audited: usize,
    pub failures: usize,
}

/// Points at which separators are run: `count` of them, alternating
/// uniform points of the unit box with canonical embeddings whose
/// coordinates are partly re-drawn.
pub fn sample_points(oracle: &Oracle, var_count: usize, count: usize, seed: u64) -> Vec<FractionalPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            if i % 2 == 0 || oracle.points.is_empty() {
                FractionalPoint((0..var_count).map(|_| rng.random::<f64>()).collect())
            } else {
                let base = &oracle.points[rng.random_range(0..oracle.points.len())];
                let values = base
                    .values()
                    .iter()
                    .map(|&v| if rng.random::<f64>() < 0.3 { rng.random::<f64>() } else { v })
                    .collect();
                FractionalPoint(values)
            }
        })
        .collect()
}

/// Every cut the family emits at ε = 0 over the sample, paired with whether
/// it keeps its promise.
pub fn audit_family(
    ctx: &SeparationContext<'_>,
    oracle: &Oracle,
    family: Family,
    points: &[FractionalPoint],
    seed: u64,
) -> Vec<(Cut, bool)> {
    points
        .iter()
        .enumerate()
        .flat_map(|(i, p)| ctx.separate(family, p, 0.0, seed.wrapping_add(i as u64)))
        .map(|c| {
            let ok = oracle.cut_passes(&c);
            (c, ok)
        })
        .collect()
}

pub fn audit_instance(
    inst: &Instance,
    families: &[Family],
    samples: usize,
    seed: u64,
) -> Result<Vec<AuditRow>, OracleError> {
    let oracle = Oracle::new(inst, EnumLimits::default())?;
    let var_count = build_model(inst, ModelOptions::default()).var_count();
    let points = sample_points(&oracle, var_count, samples, seed);
    let ctx = SeparationContext::new(inst, SeparationConfig::default(), seed);
    Ok(families
        .iter()
        .map(|&family| {
            let results = audit_family(&ctx, &oracle, family, &points, seed);
            AuditRow {
                family,
                instance: inst.name.clone(),
                audited: results.len(),
                failures: results.iter().filter(|(_, ok)| !ok).count(),
            }
        })
        .collect())
}

pub fn audit_csv(rows: &[AuditRow]) -> String {
    let mut out = String::from("family,instance,cuts_audited,failures\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.family.tag(), r.instance, r.audited, r.failures).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rsa_core::fixtures;

    #[test]
    fn fixtures_pass() {
        for inst in [fixtures::inst_a(), fixtures::inst_b()] {
            let rows = audit_instance(&inst, Family::ALL, 40, 3).unwrap();
            assert_eq!(rows.len(), Family::ALL.len());
            assert!(rows.iter().all(|r| r.failures == 0), "{rows:?}");
            assert!(rows.iter().map(|r| r.audited).sum::<usize>() > 0);
        }
    }

    #[test]
    fn sample_is_seeded() {
        let inst = fixtures::inst_a();
        let oracle = Oracle::new(&inst, EnumLimits::default()).unwrap();
        let a = sample_points(&oracle, 9, 10, 1);
        assert_eq!(a, sample_points(&oracle, 9, 10, 1));
        assert_ne!(a, sample_points(&oracle, 9, 10, 2));
        assert!(a.iter().flat_map(|p| p.values()).all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn csv_header() {
        let rows = vec![AuditRow { family: Family::FarSlotsOff, instance: "INST-A".into(), audited: 4, failures: 0 }];
        assert_eq!(audit_csv(&rows), "family,instance,cuts_audited,failures\nfarSlotsOff,INST-A,4,0\n");
    }
}
