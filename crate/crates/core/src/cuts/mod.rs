//! Cut families and their separation procedures.
//!
//! Every family is separated by enumerating candidate rows, evaluating each
//! at the fractional point, and keeping rows violated by at least the
//! family's ε. Structures that are exponential in number (brooms, cycles,
//! minimal cuts) come from [`pools::Pools`], built once per instance and
//! sampled on each call.

pub mod contiguity;
pub mod flow;
pub mod nonoverlap;
pub mod pools;

use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::instance::Instance;
use crate::model::{Dims, FractionalPoint, LinearRow, Sense};
use pools::Pools;

/// Violations at or below this are treated as satisfied, whatever ε is.
pub const MIN_VIOLATION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CutKind {
    /// Satisfied by every feasible solution.
    Valid,
    /// Valid equation.
    Equation,
    /// May remove feasible solutions but keeps at least one optimum.
    Optimality,
}

impl CutKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CutKind::Valid => "valid",
            CutKind::Equation => "equation",
            CutKind::Optimality => "optimality",
        }
    }
}

macro_rules! families {
    ($( $variant:ident => $tag:literal, $kind:ident; )*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Family {
            $( $variant, )*
        }

        impl Family {
            pub const ALL: &'static [Family] = &[$( Family::$variant, )*];

            pub fn tag(self) -> &'static str {
                match self {
                    $( Family::$variant => $tag, )*
                }
            }

            pub fn kind(self) -> CutKind {
                match self {
                    $( Family::$variant => CutKind::$kind, )*
                }
            }

            pub fn from_tag(tag: &str) -> Option<Family> {
                match tag {
                    $( $tag => Some(Family::$variant), )*
                    _ => None,
                }
            }
        }
    };
}

families! {
    OneSlotOnceFromV => "oneSlotOnceFromV", Optimality;
    OneSlotOnceFromSrc => "oneSlotOnceFromSrc", Optimality;
    ExactlyVdFromV => "exactlyVdFromV", Optimality;
    ExactlyVdFromSrc => "exactlyVdFromSrc", Optimality;
    NotBranchFromV => "notBranchFromV", Optimality;
    NotBranchFromSrc => "notBranchFromSrc", Optimality;
    EqAmountOfAsForEachUsedS => "eqAmountOfAsForEachUsedS", Optimality;
    EqAmountSummed => "eqAmountSummed", Optimality;
    MaximumSetOfPaths => "maximumSetOfPaths", Optimality;
    IncomingDBrooms => "incomingDBrooms", Optimality;
    OutcomingDBrooms => "outcomingDBrooms", Optimality;
    InducedArcsPerSlot => "inducedArcsPerSlot", Optimality;
    InducedArcsSummed => "inducedArcsSummed", Optimality;
    AntiparallelPair => "antiparallelPair", Optimality;
    AntiparallelImplication => "antiparallelImplication", Optimality;
    ContiguityIneqs => "contiguityIneqs", Valid;
    SymmContiguityIneqs => "symmContiguityIneqs", Valid;
    ContiguityEqs => "contiguityEqs", Equation;
    PpalSlots => "ppalSlots", Optimality;
    PpalSlotsFromSrc => "ppalSlotsFromSrc", Optimality;
    PpalSlotsToDst => "ppalSlotsToDst", Optimality;
    PpalSlotsFirstResidue => "ppalSlotsFirstResidue", Optimality;
    PpalSlotsCentral => "ppalSlotsCentral", Optimality;
    FarSlotsOff => "farSlotsOff", Optimality;
    SymmetricalBfContiguity => "symmetricalBFcontiguity", Valid;
    NonOverBySum => "nonOverBySum", Valid;
    KDemandsNotExceed => "kDemandsNotExceed", Optimality;
    KDemandsBySum => "kDemandsBySum", Optimality;
    PosFitLow2DBySlots => "posFitLow2DBySlots", Optimality;
    PosFitLow2DAggregated => "posFitLow2DAggregated", Optimality;
    PosFitLow2DSummed => "posFitLow2DSummed", Optimality;
    PosFit3DBySlots => "posFit3DBySlots", Valid;
    PosFit2Sets => "posFit2Sets", Valid;
    CentralSlotsLb => "centralSlotsLB", Optimality;
    CentralSlots3D => "centralSlots3D", Optimality;
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A separated row together with its family and its violation at the point
/// it was separated from.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub row: LinearRow,
    pub family: Family,
    pub kind: CutKind,
    pub violation: f64,
}

impl Cut {
    pub fn new(row: LinearRow, family: Family, violation: f64) -> Self {
        Self { row, family, kind: family.kind(), violation }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationConfig {
    /// Most-violated rows kept per separator call.
    pub max_cuts_per_call: usize,
    /// Pool structures sampled per call.
    pub pool_sample: usize,
    /// Longest cycle (in arcs) kept in the cycle pools.
    pub max_cycle_len: usize,
    /// Cap on the size of each cycle pool.
    pub max_cycles: usize,
    /// Structures with more arcs are skipped by the exhaustive path search.
    pub max_structure_arcs: usize,
    pub min_cuts_per_demand: usize,
    /// Also enumerate minimal demand triples for the k-demand families.
    pub demand_triples: bool,
}

impl Default for SeparationConfig {
    fn default() -> Self {
        Self {
            max_cuts_per_call: 500,
            pool_sample: 200,
            max_cycle_len: 6,
            max_cycles: 2000,
            max_structure_arcs: 12,
            min_cuts_per_demand: 20,
            demand_triples: false,
        }
    }
}

/// Instance data and precomputed pools shared by all separators.
#[derive(Debug, Clone)]
pub struct SeparationContext<'a> {
    pub inst: &'a Instance,
    pub dims: Dims,
    pub pools: Pools,
    pub config: SeparationConfig,
}

impl<'a> SeparationContext<'a> {
    pub fn new(inst: &'a Instance, config: SeparationConfig, seed: u64) -> Self {
        let pools = Pools::build(inst, &config, seed);
        Self { inst, dims: Dims::of(inst), pools, config }
    }

    /// Rows of `family` violated at `point` by at least `max(eps, MIN_VIOLATION)`,
    /// most violated first, at most `max_cuts_per_call` of them. `seed`
    /// drives pool sampling.
    pub fn separate(&self, family: Family, point: &FractionalPoint, eps: f64, seed: u64) -> Vec<Cut> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let threshold = eps.max(MIN_VIOLATION);
        let mut em = Emitter::new(family, point.values(), Some(threshold));
        self.dispatch(family, &mut em, Some(&mut rng));
        let mut cuts = em.cuts;
        // Stable: equal violations keep enumeration order.
        cuts.sort_by(|a, b| b.violation.partial_cmp(&a.violation).unwrap_or(core::cmp::Ordering::Equal));
        cuts.truncate(self.config.max_cuts_per_call);
        cuts
    }

    /// Every row the family can produce on this instance, over the full pools.
    /// The `violation` field is measured at the zero point.
    pub fn all_rows(&self, family: Family) -> Vec<Cut> {
        let zeros = alloc::vec![0.0; self.dims.var_count()];
        let mut em = Emitter::new(family, &zeros, None);
        self.dispatch(family, &mut em, None);
        em.cuts
    }

    fn dispatch(&self, family: Family, em: &mut Emitter<'_>, rng: Option<&mut ChaCha8Rng>) {
        use contiguity::PpalVariant;
        use flow::PathStructures;
        use Family::*;
        match family {
            OneSlotOnceFromV => flow::sep_one_slot_once(self, em, false),
            OneSlotOnceFromSrc => flow::sep_one_slot_once(self, em, true),
            ExactlyVdFromV => flow::sep_exactly_vd(self, em, false),
            ExactlyVdFromSrc => flow::sep_exactly_vd(self, em, true),
            NotBranchFromV => flow::sep_not_branch(self, em, false),
            NotBranchFromSrc => flow::sep_not_branch(self, em, true),
            EqAmountOfAsForEachUsedS => flow::sep_eq_amount_arcs(self, em, false),
            EqAmountSummed => flow::sep_eq_amount_arcs(self, em, true),
            MaximumSetOfPaths => flow::sep_max_disjoint_paths(self, em, PathStructures::All, rng),
            IncomingDBrooms => flow::sep_max_disjoint_paths(self, em, PathStructures::InBrooms, rng),
            OutcomingDBrooms => flow::sep_max_disjoint_paths(self, em, PathStructures::OutBrooms, rng),
            InducedArcsPerSlot => flow::sep_induced_arcs(self, em, false, rng),
            InducedArcsSummed => flow::sep_induced_arcs(self, em, true, rng),
            AntiparallelPair => flow::sep_antiparallel_pair(self, em),
            AntiparallelImplication => flow::sep_antiparallel_implication(self, em),
            ContiguityIneqs => contiguity::sep_contiguity_ineqs(self, em, false),
            SymmContiguityIneqs => contiguity::sep_contiguity_ineqs(self, em, true),
            ContiguityEqs => contiguity::sep_contiguity_eqs(self, em),
            PpalSlots => contiguity::sep_ppal_slots(self, em, PpalVariant::AllCuts),
            PpalSlotsFromSrc => contiguity::sep_ppal_slots(self, em, PpalVariant::FromSrc),
            PpalSlotsToDst => contiguity::sep_ppal_slots(self, em, PpalVariant::ToDst),
            PpalSlotsFirstResidue => contiguity::sep_ppal_slots(self, em, PpalVariant::FirstResidue),
            PpalSlotsCentral => contiguity::sep_ppal_slots(self, em, PpalVariant::Central),
            FarSlotsOff => contiguity::sep_far_slots_off(self, em),
            SymmetricalBfContiguity => contiguity::sep_symmetrical_bf_contiguity(self, em),
            NonOverBySum => nonoverlap::sep_non_over_by_sum(self, em),
            KDemandsNotExceed => nonoverlap::sep_k_demands_not_exceed(self, em),
            KDemandsBySum => nonoverlap::sep_k_demands_by_sum(self, em),
            PosFitLow2DBySlots => nonoverlap::sep_pos_fit_low_2d_by_slots(self, em),
            PosFitLow2DAggregated => nonoverlap::sep_pos_fit_low_2d(self, em, false),
            PosFitLow2DSummed => nonoverlap::sep_pos_fit_low_2d(self, em, true),
            PosFit3DBySlots => nonoverlap::sep_pos_fit_3d(self, em),
            PosFit2Sets => nonoverlap::sep_pos_fit_two_sets(self, em),
            CentralSlotsLb => nonoverlap::sep_central_between_lb(self, em),
            CentralSlots3D => nonoverlap::sep_central_between_3d(self, em),
        }
    }

    /// Value of `u[d,e,s]` at the point being separated.
    #[inline]
    pub(crate) fn var(&self, d: usize, e: usize, s: u32) -> usize {
        self.dims.var(d, e, s)
    }
}

/// Collects candidate rows term by term and keeps the violated ones.
///
/// In collect-all mode (`threshold == None`) every candidate is kept; the
/// separators must then not prune on point values.
pub struct Emitter<'p> {
    family: Family,
    values: &'p [f64],
    threshold: Option<f64>,
    terms: Vec<(usize, f64)>,
    pub cuts: Vec<Cut>,
}

impl<'p> Emitter<'p> {
    pub fn new(family: Family, values: &'p [f64], threshold: Option<f64>) -> Self {
        Self { family, values, threshold, terms: Vec::new(), cuts: Vec::new() }
    }

    /// True when candidates may be skipped based on point values.
    #[inline]
    pub fn pruning(&self) -> bool {
        self.threshold.is_some()
    }

    #[inline]
    pub fn value(&self, var: usize) -> f64 {
        self.values[var]
    }

    #[inline]
    pub fn term(&mut self, var: usize, coeff: f64) {
        self.terms.push((var, coeff));
    }

    /// Closes the current candidate `Σ terms sense rhs`.
    pub fn finish(&mut self, sense: Sense, rhs: f64) {
        let lhs: f64 = self.terms.iter().map(|&(v, c)| c * self.values[v]).sum();
        let keep = match self.threshold {
            None => true,
            Some(t) => sense.violation(lhs, rhs) >= t - 1e-12,
        };
        if keep {
            let row = LinearRow::new(self.family.tag(), self.terms.drain(..), sense, rhs);
            let violation = row.violation(self.values);
            if self.threshold.is_none_or(|t| violation >= t) {
                self.cuts.push(Cut::new(row, self.family, violation));
            }
        } else {
            self.terms.clear();
        }
    }
}

/// Picks at most `limit` indices out of `0..len`, uniformly, in sorted
/// order; all of them when no sampler is given.
pub(crate) fn sample_indices(len: usize, limit: usize, rng: Option<&mut ChaCha8Rng>) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..len).collect();
    if let Some(rng) = rng {
        if len > limit {
            use rand::seq::SliceRandom;
            let (chosen, _) = idx.partial_shuffle(rng, limit);
            let mut chosen = chosen.to_vec();
            chosen.sort_unstable();
            return chosen;
        }
    }
    idx.truncate(len);
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_roundtrip_and_are_unique() {
        let mut tags: Vec<&str> = Family::ALL.iter().map(|f| f.tag()).collect();
        for f in Family::ALL {
            assert_eq!(Family::from_tag(f.tag()), Some(*f));
        }
        tags.sort_unstable();
        tags.dedup();
        assert_eq!(tags.len(), Family::ALL.len());
        assert_eq!(Family::ALL.len(), 35);
        assert_eq!(Family::from_tag("contiguityASCC"), None);
    }

    #[test]
    fn emitter_threshold() {
        let values = [0.7, 0.7];
        let mut em = Emitter::new(Family::OneSlotOnceFromV, &values, Some(0.5));
        em.term(0, 1.0);
        em.term(1, 1.0);
        em.finish(Sense::Le, 1.0);
        assert!(em.cuts.is_empty());
        let mut em = Emitter::new(Family::OneSlotOnceFromV, &values, Some(0.3));
        em.term(0, 1.0);
        em.term(1, 1.0);
        em.finish(Sense::Le, 1.0);
        assert_eq!(em.cuts.len(), 1);
        assert!((em.cuts[0].violation - 0.4).abs() < 1e-12);
    }
}
