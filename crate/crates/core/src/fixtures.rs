//! Hand-written micro instances used by tests, the acceptance suite and the
//! CLI's built-in names.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::instance::{Demand, Digraph, Instance};

/// INST-A: nodes a,b,c; arcs ab, bc, ac; 3 slots; one demand a→c of volume 2.
pub fn inst_a() -> Instance {
    let g = Digraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
    Instance::new("INST-A", g, vec![Demand::new(0, 2, 2)], 3).unwrap()
}

/// INST-B: a single arc ab, 3 slots, demands (a,b,2) and (a,b,1).
pub fn inst_b() -> Instance {
    let g = Digraph::new(2, vec![(0, 1)]).unwrap();
    Instance::new("INST-B", g, vec![Demand::new(0, 1, 2), Demand::new(0, 1, 1)], 3).unwrap()
}

/// INST-C: like INST-B with only 2 slots, hence infeasible.
pub fn inst_c() -> Instance {
    let g = Digraph::new(2, vec![(0, 1)]).unwrap();
    Instance::new("INST-C", g, vec![Demand::new(0, 1, 2), Demand::new(0, 1, 1)], 2).unwrap()
}

/// Bidirectional ring on `n` nodes; arcs i→i+1 first, then i+1→i.
pub fn ring(n: usize, demands: Vec<Demand>, slots: u32) -> Instance {
    let mut arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    arcs.extend((0..n).map(|i| ((i + 1) % n, i)));
    let g = Digraph::new(n, arcs).unwrap();
    Instance::new(format!("ring{n}"), g, demands, slots).unwrap()
}

/// Bidirectional `rows × cols` grid, nodes numbered row-major.
pub fn grid(rows: usize, cols: usize, demands: Vec<Demand>, slots: u32) -> Instance {
    let id = |r: usize, c: usize| r * cols + c;
    let mut arcs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                arcs.push((id(r, c), id(r, c + 1)));
                arcs.push((id(r, c + 1), id(r, c)));
            }
            if r + 1 < rows {
                arcs.push((id(r, c), id(r + 1, c)));
                arcs.push((id(r + 1, c), id(r, c)));
            }
        }
    }
    let g = Digraph::new(rows * cols, arcs).unwrap();
    Instance::new(format!("grid{rows}x{cols}"), g, demands, slots).unwrap()
}

/// Complete digraph on `n` nodes.
pub fn complete(n: usize, demands: Vec<Demand>, slots: u32) -> Instance {
    let arcs = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let g = Digraph::new(n, arcs).unwrap();
    Instance::new(format!("complete{n}"), g, demands, slots).unwrap()
}

/// Looks up a built-in instance by name (`INST-A`, `INST-B`, `INST-C`).
pub fn by_name(name: &str) -> Option<Instance> {
    match name.to_ascii_uppercase().as_str() {
        "INST-A" => Some(inst_a()),
        "INST-B" => Some(inst_b()),
        "INST-C" => Some(inst_c()),
        _ => None,
    }
}
