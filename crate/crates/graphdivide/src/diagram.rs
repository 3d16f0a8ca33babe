//! Link diagrams: crossings with over/under resolution, PD and Gauss
//! codes, and reconstruction from PD codes (used for reference tables).

use crate::doubling::{
    along_segment_cmp, branch1_over, crossing_sign, genericity_check, materialize_cuts,
    GeometryError, RawCrossing, SegTag, TaggedCurves,
};
use crate::geom::{Dir, PlCurve, Pt};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct Crossing {
    pub point: Pt,
    pub over_curve: usize,
    pub under_curve: usize,
    pub over_dir: Dir,
    pub under_dir: Dir,
    pub sign: i64,
}

/// A resolved planar diagram.
#[derive(Clone, Debug)]
pub struct LinkDiagram {
    pub crossings: Vec<Crossing>,
    /// PD tuples (a, b, c, d): incoming under-arc first, then
    /// counterclockwise. Arc ids are 1-based and consecutive along each
    /// component in traversal order.
    pub pd: Vec<[usize; 4]>,
    /// Components that meet no crossing at all.
    pub free_loops: usize,
    /// Total component count (including free loops).
    pub components: usize,
    /// Gauss code per component: +label when passing over, -label under.
    pub gauss: Vec<Vec<i64>>,
}

impl LinkDiagram {
    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign).sum()
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// (writhe, crossing count, component count).
    pub fn stats(&self) -> (i64, usize, usize) {
        (self.writhe(), self.crossing_count(), self.components)
    }

    pub fn pd_text(&self) -> String {
        self.pd
            .iter()
            .map(|[a, b, c, d]| format!("X({a},{b},{c},{d})"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Resolve a family of oriented PL curves into a link diagram, treating
/// every segment as a regular strand (tangent-direction rule only).
pub fn build_diagram(curves: &[PlCurve]) -> Result<LinkDiagram, GeometryError> {
    let rep = genericity_check(curves)?;
    resolve_diagram(curves, &rep.crossings, None)
}

/// Resolve the honest diagram of a doubled divide: the winding-rule cuts
/// are first drawn as real strands routed around the back, whose
/// crossings are forced rather than direction-resolved.
pub fn build_diagram_with_cuts(curves: &[PlCurve]) -> Result<LinkDiagram, GeometryError> {
    let tagged = materialize_cuts(curves)?;
    let raw = tagged.crossings()?;
    resolve_diagram(&tagged.curves, &raw, Some(&tagged))
}

fn resolve_diagram(
    curves: &[PlCurve],
    raw: &[RawCrossing],
    tagged: Option<&TaggedCurves>,
) -> Result<LinkDiagram, GeometryError> {
    struct Resolved {
        point: Pt,
        over: (usize, usize, Dir),
        under: (usize, usize, Dir),
        sign: i64,
    }
    let mut resolved = Vec::with_capacity(raw.len());
    for rc in raw {
        let first_over = match tagged.map(|t| (t.tags[rc.c1][rc.s1], t.tags[rc.c2][rc.s2])) {
            Some((SegTag::ForcedOver, SegTag::Regular)) => true,
            Some((SegTag::ForcedUnder, SegTag::Regular)) => false,
            Some((SegTag::Regular, SegTag::ForcedOver)) => false,
            Some((SegTag::Regular, SegTag::ForcedUnder)) => true,
            None | Some((SegTag::Regular, SegTag::Regular)) => branch1_over(rc)?,
            Some(_) => {
                return Err(GeometryError::Genericity {
                    kind: "cut strands crossing each other".into(),
                    x: rc.p.x.to_string(),
                    y: rc.p.y.to_string(),
                })
            }
        };
        let (over, under) = if first_over {
            ((rc.c1, rc.s1, rc.d1), (rc.c2, rc.s2, rc.d2))
        } else {
            ((rc.c2, rc.s2, rc.d2), (rc.c1, rc.s1, rc.d1))
        };
        resolved.push(Resolved {
            point: rc.p.clone(),
            sign: crossing_sign(&over.2, &under.2),
            over,
            under,
        });
    }

    // Passages of each curve through crossings, ordered along the curve.
    // passage = (crossing id, is_over).
    let mut passages: Vec<Vec<(usize, bool)>> = vec![Vec::new(); curves.len()];
    for (ci, curve) in curves.iter().enumerate() {
        let mut on_curve: Vec<(usize, usize, Pt, bool)> = Vec::new(); // (seg, xid, point, over)
        for (xid, r) in resolved.iter().enumerate() {
            if r.over.0 == ci {
                on_curve.push((r.over.1, xid, r.point.clone(), true));
            }
            if r.under.0 == ci {
                on_curve.push((r.under.1, xid, r.point.clone(), false));
            }
        }
        on_curve.sort_by(|a, b| {
            a.0.cmp(&b.0).then_with(|| {
                let (o, _) = curve.seg(a.0);
                let d = curve.seg_dir(a.0);
                along_segment_cmp(&a.2, o, &d, &b.2)
            })
        });
        passages[ci] = on_curve.into_iter().map(|(_, xid, _, over)| (xid, over)).collect();
    }

    // Arc (edge) labels: consecutive along each component.
    // Passage i of a component consumes edge (i-1) and produces edge i;
    // the component's edges are base+1 ..= base+k, edge i = base + 1 + i.
    let mut free_loops = 0usize;
    let mut edge_in: BTreeMap<(usize, bool), usize> = BTreeMap::new(); // (xid, over) -> incoming edge
    let mut edge_out: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    let mut base = 0usize;
    let mut gauss = Vec::new();
    for list in passages.iter() {
        if list.is_empty() {
            free_loops += 1;
            continue;
        }
        let k = list.len();
        let mut code = Vec::with_capacity(k);
        for (i, &(xid, over)) in list.iter().enumerate() {
            let incoming = base + 1 + ((i + k - 1) % k);
            let outgoing = base + 1 + i;
            edge_in.insert((xid, over), incoming);
            edge_out.insert((xid, over), outgoing);
            code.push(if over { (xid + 1) as i64 } else { -((xid + 1) as i64) });
        }
        gauss.push(code);
        base += k;
    }

    // PD tuples: a = incoming under, then counterclockwise.
    let mut pd = Vec::with_capacity(resolved.len());
    for (xid, r) in resolved.iter().enumerate() {
        let a = edge_in[&(xid, false)];
        let c = edge_out[&(xid, false)];
        let over_in = edge_in[&(xid, true)];
        let over_out = edge_out[&(xid, true)];
        // First over-ray counterclockwise from the incoming-under ray:
        // the incoming over edge if under x over > 0, else the outgoing.
        let (b, d) = if r.under.2.cross(&r.over.2) > 0 {
            (over_in, over_out)
        } else {
            (over_out, over_in)
        };
        pd.push([a, b, c, d]);
    }

    let crossings = resolved
        .into_iter()
        .map(|r| Crossing {
            point: r.point,
            over_curve: r.over.0,
            under_curve: r.under.0,
            over_dir: r.over.2,
            under_dir: r.under.2,
            sign: r.sign,
        })
        .collect();

    Ok(LinkDiagram {
        crossings,
        pd,
        free_loops,
        components: curves.len(),
        gauss,
    })
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum PdError {
    #[error("arc {0} does not appear exactly twice")]
    BadArcCount(usize),
    #[error("arc numbering is not consecutive along components")]
    BadNumbering,
}

/// Abstract diagram reconstructed from a PD code: orientations, signs,
/// writhe and component count, assuming the standard table convention of
/// consecutive arc numbering along each oriented component.
#[derive(Clone, Debug)]
pub struct PdDiagram {
    pub pd: Vec<[usize; 4]>,
    pub signs: Vec<i64>,
    pub components: usize,
}

impl PdDiagram {
    pub fn writhe(&self) -> i64 {
        self.signs.iter().sum()
    }
}

pub fn from_pd(pd: &[[usize; 4]]) -> Result<PdDiagram, PdError> {
    if pd.is_empty() {
        return Ok(PdDiagram {
            pd: Vec::new(),
            signs: Vec::new(),
            components: 1,
        });
    }
    let n = pd.len();
    // Arc multiset check.
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for t in pd {
        for &x in t {
            *count.entry(x).or_insert(0) += 1;
        }
    }
    for (&arc, &c) in &count {
        if c != 2 {
            return Err(PdError::BadArcCount(arc));
        }
    }

    // Components: connect consecutive arcs (a,c) and (b,d).
    let ids: Vec<usize> = count.keys().copied().collect();
    let index: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut dsu: Vec<usize> = (0..ids.len()).collect();
    fn find(dsu: &mut Vec<usize>, a: usize) -> usize {
        if dsu[a] != a {
            let r = find(dsu, dsu[a]);
            dsu[a] = r;
        }
        dsu[a]
    }
    let mut union = |a: usize, b: usize, dsu: &mut Vec<usize>| {
        let ra = find(dsu, a);
        let rb = find(dsu, b);
        if ra != rb {
            dsu[ra] = rb;
        }
    };
    for t in pd {
        union(index[&t[0]], index[&t[2]], &mut dsu);
        union(index[&t[1]], index[&t[3]], &mut dsu);
    }
    let mut comp_arcs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &a in &ids {
        let r = find(&mut dsu, index[&a]);
        comp_arcs.entry(r).or_default().push(a);
    }
    let components = comp_arcs.len();

    // Successor of an arc within its component: next id cyclically.
    let mut succ: BTreeMap<usize, usize> = BTreeMap::new();
    for arcs in comp_arcs.values() {
        let mut sorted = arcs.clone();
        sorted.sort_unstable();
        // Table numbering is consecutive along the strand.
        for w in sorted.windows(2) {
            if w[1] != w[0] + 1 {
                return Err(PdError::BadNumbering);
            }
        }
        for (i, &a) in sorted.iter().enumerate() {
            succ.insert(a, sorted[(i + 1) % sorted.len()]);
        }
    }

    // Sign: positive when the over strand runs d -> b.
    let mut signs = Vec::with_capacity(n);
    for t in pd {
        let (b, d) = (t[1], t[3]);
        let sign = if succ[&d] == b {
            1
        } else if succ[&b] == d {
            -1
        } else {
            return Err(PdError::BadNumbering);
        };
        signs.push(sign);
    }

    Ok(PdDiagram {
        pd: pd.to_vec(),
        signs,
        components,
    })
}

/// Number of link components represented by the arcs of a PD code.
fn pd_components(pd: &[[usize; 4]]) -> usize {
    if pd.is_empty() {
        return 0;
    }
    let mut ids: Vec<usize> = pd.iter().flatten().copied().collect();
    ids.sort_unstable();
    ids.dedup();
    let index = |a: usize| ids.binary_search(&a).unwrap();
    let mut dsu: Vec<usize> = (0..ids.len()).collect();
    fn find(dsu: &mut Vec<usize>, a: usize) -> usize {
        if dsu[a] != a {
            let r = find(dsu, dsu[a]);
            dsu[a] = r;
        }
        dsu[a]
    }
    for t in pd {
        for (x, y) in [(t[0], t[2]), (t[1], t[3])] {
            let rx = find(&mut dsu, index(x));
            let ry = find(&mut dsu, index(y));
            if rx != ry {
                dsu[rx] = ry;
            }
        }
    }
    let mut roots: Vec<usize> = (0..ids.len()).map(|i| find(&mut dsu, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Untwist kinks (Reidemeister I) and cancel pokes (Reidemeister II) in
/// a PD code. A poke is recognized by one shared arc passing over at
/// both crossings while the other passes under at both; anything more
/// entangled is left alone. Returns the reduced code, the surviving
/// crossing signs, and the number of crossing-free loops split off.
pub fn pd_simplify(pd: &[[usize; 4]], signs: &[i64]) -> (Vec<[usize; 4]>, Vec<i64>, usize) {
    let mut pd = pd.to_vec();
    let mut signs = signs.to_vec();
    let before = pd_components(&pd);

    fn rename(pd: &mut [[usize; 4]], from: usize, to: usize) {
        if from == to {
            return;
        }
        for t in pd.iter_mut() {
            for v in t.iter_mut() {
                if *v == from {
                    *v = to;
                }
            }
        }
    }

    'outer: loop {
        // Reidemeister I: a loop arc occupying two adjacent slots.
        for k in 0..pd.len() {
            let t = pd[k];
            for i in 0..4 {
                if t[i] == t[(i + 1) % 4] {
                    let x = t[(i + 2) % 4];
                    let y = t[(i + 3) % 4];
                    pd.remove(k);
                    signs.remove(k);
                    rename(&mut pd, y, x);
                    continue 'outer;
                }
            }
        }
        // Reidemeister II.
        for j in 0..pd.len() {
            for k in j + 1..pd.len() {
                let (tj, tk) = (pd[j], pd[k]);
                let mut shared: Vec<usize> = Vec::new();
                for &a in &tj {
                    if tk.contains(&a) && !shared.contains(&a) {
                        shared.push(a);
                    }
                }
                if shared.len() != 2 {
                    continue;
                }
                let over = |t: &[usize; 4], a: usize| t[1] == a || t[3] == a;
                let under = |t: &[usize; 4], a: usize| t[0] == a || t[2] == a;
                let (p, q) = (shared[0], shared[1]);
                let (p, q) = if over(&tj, p) && over(&tk, p) && under(&tj, q) && under(&tk, q) {
                    (p, q)
                } else if over(&tj, q) && over(&tk, q) && under(&tj, p) && under(&tk, p) {
                    (q, p)
                } else {
                    continue;
                };
                let other_over = |t: &[usize; 4]| if t[1] == p { t[3] } else { t[1] };
                let other_under = |t: &[usize; 4]| if t[0] == q { t[2] } else { t[0] };
                let (aj, ak) = (other_over(&tj), other_over(&tk));
                let (uj, uk) = (other_under(&tj), other_under(&tk));
                debug_assert_ne!(signs[j], signs[k], "poke crossings must have opposite signs");
                pd.remove(k);
                signs.remove(k);
                pd.remove(j);
                signs.remove(j);
                rename(&mut pd, ak, aj);
                let uj = if uj == ak { aj } else { uj };
                let uk = if uk == ak { aj } else { uk };
                rename(&mut pd, uk, uj);
                continue 'outer;
            }
        }
        break;
    }

    let after = pd_components(&pd);
    (pd, signs, before - after)
}

/// Parse "X(a,b,c,d)" lines (or a JSON-style [[a,b,c,d],...]) into tuples.
pub fn parse_pd_text(s: &str) -> Option<Vec<[usize; 4]>> {
    let mut out = Vec::new();
    let cleaned: String = s
        .chars()
        .map(|c| if c.is_ascii_digit() { c } else { ' ' })
        .collect();
    let nums: Vec<usize> = cleaned
        .split_whitespace()
        .map(|w| w.parse().ok())
        .collect::<Option<Vec<_>>>()?;
    if nums.is_empty() || nums.len() % 4 != 0 {
        return None;
    }
    for q in nums.chunks(4) {
        out.push([q[0], q[1], q[2], q[3]]);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::doubling::double;

    #[test]
    fn embedded_circle_is_a_free_loop_unknot() {
        let v = parse("( | )").unwrap();
        let d = double(&v).unwrap();
        let diag = build_diagram(&d.curves).unwrap();
        assert_eq!(diag.stats(), (0, 0, 2));
        assert_eq!(diag.free_loops, 2);
    }

    #[test]
    fn pd_arc_ids_appear_exactly_twice() {
        let v = parse("( | X | >+ >+").unwrap();
        let d = double(&v).unwrap();
        let diag = build_diagram(&d.curves).unwrap();
        let mut counts = std::collections::BTreeMap::new();
        for t in &diag.pd {
            for x in t {
                *counts.entry(*x).or_insert(0usize) += 1;
            }
        }
        assert!(counts.values().all(|&c| c == 2));
        assert_eq!(diag.pd.len(), 6); // 4 from the crossing cell, 1 per plus endpoint
    }

    #[test]
    fn rebuilding_from_pd_preserves_writhe_and_components() {
        let v = parse("( | X | >+ >+").unwrap();
        let d = double(&v).unwrap();
        let diag = build_diagram(&d.curves).unwrap();
        let rebuilt = from_pd(&diag.pd).unwrap();
        assert_eq!(rebuilt.writhe(), diag.writhe());
        assert_eq!(rebuilt.components + diag.free_loops, diag.components);
    }

    #[test]
    fn table_trefoil_roundtrip() {
        // Rolfsen 3_1 as listed in public tables.
        let pd = parse_pd_text("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let d = from_pd(&pd).unwrap();
        assert_eq!(d.components, 1);
        assert_eq!(d.writhe().abs(), 3);
    }
}
