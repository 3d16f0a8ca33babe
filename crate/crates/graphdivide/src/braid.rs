//! Braid closures as PD codes, used to generate reference diagrams.
//!
//! Letters are nonzero integers: +i is the positive crossing of strands
//! i and i+1 (1-based), -i the negative one. The closure identifies the
//! top of each strand position with its bottom.

use crate::diagram::PdDiagram;
use std::collections::BTreeMap;

/// Build the closure of a braid word as a PD diagram with table-style
/// consecutive arc numbering. Strand positions not touched by any letter
/// close into extra crossing-free unknot components, returned separately.
pub fn braid_closure_pd(strands: usize, word: &[i32]) -> (PdDiagram, usize) {
    assert!(strands >= 1);
    let mut next_arc = strands + 1;
    let mut cur: Vec<usize> = (1..=strands).collect();
    let initial = cur.clone();
    let mut pd: Vec<[usize; 4]> = Vec::new();
    let mut signs: Vec<i64> = Vec::new();
    let mut succ: BTreeMap<usize, usize> = BTreeMap::new();

    for &letter in word {
        assert_ne!(letter, 0, "braid letters are nonzero");
        let p = letter.unsigned_abs() as usize - 1;
        let q = p + 1;
        assert!(q < strands, "letter {letter} exceeds the strand count");
        let new_p = next_arc;
        let new_q = next_arc + 1;
        next_arc += 2;
        if letter > 0 {
            // Over strand runs from position p to q.
            let (a, b, c, d) = (cur[q], new_q, new_p, cur[p]);
            pd.push([a, b, c, d]);
            signs.push(1);
            succ.insert(a, c);
            succ.insert(d, b);
        } else {
            let (a, b, c, d) = (cur[p], cur[q], new_q, new_p);
            pd.push([a, b, c, d]);
            signs.push(-1);
            succ.insert(a, c);
            succ.insert(b, d);
        }
        cur[p] = new_p;
        cur[q] = new_q;
    }

    // Closure: merge each final arc into its initial one.
    let mut free_loops = 0usize;
    for j in 0..strands {
        if cur[j] == initial[j] {
            free_loops += 1;
            continue;
        }
        let from = cur[j];
        let to = initial[j];
        for t in pd.iter_mut() {
            for v in t.iter_mut() {
                if *v == from {
                    *v = to;
                }
            }
        }
        let mut renamed: BTreeMap<usize, usize> = BTreeMap::new();
        for (k, v) in succ.iter() {
            let nk = if *k == from { to } else { *k };
            let nv = if *v == from { to } else { *v };
            renamed.insert(nk, nv);
        }
        succ = renamed;
    }

    // Renumber arcs consecutively along each component.
    let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
    let mut next = 1usize;
    let arcs: Vec<usize> = succ.keys().copied().collect();
    for &start in &arcs {
        if relabel.contains_key(&start) {
            continue;
        }
        let mut a = start;
        loop {
            relabel.insert(a, next);
            next += 1;
            a = succ[&a];
            if a == start {
                break;
            }
        }
    }
    for t in pd.iter_mut() {
        for v in t.iter_mut() {
            *v = relabel[v];
        }
    }

    // Component count: cycles of succ.
    let mut seen: BTreeMap<usize, bool> = BTreeMap::new();
    let mut components = 0usize;
    for &a in &arcs {
        if seen.get(&a).copied().unwrap_or(false) {
            continue;
        }
        components += 1;
        let mut x = a;
        loop {
            seen.insert(x, true);
            x = succ[&x];
            if x == a {
                break;
            }
        }
    }
    if pd.is_empty() {
        components = 0;
    }

    (
        PdDiagram {
            pd,
            signs,
            components,
        },
        free_loops,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::from_pd;
    use crate::invariants::{determinant, jones_from_parts};
    use crate::poly::LaurentPoly;

    fn jones_of_braid(strands: usize, word: &[i32]) -> LaurentPoly {
        let (d, free) = braid_closure_pd(strands, word);
        jones_from_parts(&d.pd, free, d.writhe()).unwrap()
    }

    #[test]
    fn braid_trefoil_matches_the_table_diagram() {
        // sigma_1^3 closes to the right-handed trefoil.
        let v = jones_of_braid(2, &[1, 1, 1]);
        let expected = LaurentPoly::from_terms(&[(8, -1), (6, 1), (2, 1)]);
        assert_eq!(v, expected);
        // And the mirror word gives the mirror polynomial.
        let vm = jones_of_braid(2, &[-1, -1, -1]);
        assert_eq!(vm, expected.mirror());
    }

    #[test]
    fn braid_figure_eight_is_amphichiral_with_det_five() {
        let v = jones_of_braid(3, &[1, -2, 1, -2]);
        assert_eq!(v, v.mirror());
        assert_eq!(determinant(&v), 5);
        // V(4_1) = t^-2 - t^-1 + 1 - t + t^2.
        let expected =
            LaurentPoly::from_terms(&[(-4, 1), (-2, -1), (0, 1), (2, -1), (4, 1)]);
        assert_eq!(v, expected);
    }

    #[test]
    fn braid_hopf_link_jones() {
        let v = jones_of_braid(2, &[1, 1]);
        // Positive Hopf link: -t^(1/2)(1 + t^2) = -t^(1/2) - t^(5/2).
        let expected = LaurentPoly::from_terms(&[(1, -1), (5, -1)]);
        assert_eq!(v, expected);
        let (d, _) = braid_closure_pd(2, &[1, 1]);
        assert_eq!(d.components, 2);
    }

    #[test]
    fn braid_pd_is_table_readable() {
        let (d, _) = braid_closure_pd(2, &[1, 1, 1]);
        let re = from_pd(&d.pd).unwrap();
        assert_eq!(re.writhe(), 3);
        assert_eq!(re.components, 1);
    }

    #[test]
    fn unused_strands_close_into_free_loops() {
        let (d, free) = braid_closure_pd(3, &[1]);
        assert_eq!(free, 1);
        assert_eq!(d.components, 1); // the two braided strands merge
    }
}
