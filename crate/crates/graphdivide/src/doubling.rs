//! Geometric realization: lay the tangle product on a grid, double each
//! strand into two oriented rails, and push the whole curve system off
//! to one side for linking computations.
//!
//! Grid scheme: column `i` owns `x in [i, i+1]`; the template box sits
//! in the middle third and the outer thirds carry the fan diagonals that
//! re-height strands between the gap rows (at integer interfaces) and
//! the template band rows. All coordinates are exact rationals.

use crate::geom::{
    direction_cmp, point_on_curve, seg_intersect, winding_number, Dir, PlCurve, Pt, Q, SegMeet,
};
use crate::tangle::{Rail, TangleKind, Validated};
use crate::templates::{template_paths, PortRail, RailPath};
use num::Zero;
use std::cmp::Ordering;
use std::collections::BTreeMap;

pub const RAIL_HALF_WIDTH_DEN: i128 = 4; // w = 1/4 of a grid unit

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OffsetSide {
    Left,
    Right,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("genericity failure: {kind} at {x}, {y}")]
    Genericity { kind: String, x: String, y: String },
    #[error("template produced a non-transverse intersection")]
    TemplateGenericity,
    #[error("offset degenerates even after shrinking the gauge")]
    OffsetDegeneracy,
}

/// Oriented doubled curve system on the grid.
#[derive(Clone, Debug)]
pub struct OrientedDivide {
    pub curves: Vec<PlCurve>,
    /// Per column, per tangle: (band start row, band height).
    pub bands: Vec<Vec<(usize, usize)>>,
    pub ncols: usize,
    pub w: Q,
}

impl OrientedDivide {
    /// Which tangle cell a point belongs to, judging by position.
    pub fn cell_of(&self, p: &Pt) -> Option<(usize, usize)> {
        let third = Q::new(1, 3);
        let two_thirds = Q::new(2, 3);
        let ci = p.x.floor().to_integer();
        if ci < 0 || ci as usize >= self.ncols {
            return None;
        }
        let frac = p.x - Q::from_integer(ci);
        if frac < third || frac > two_thirds {
            return None;
        }
        let ci = ci as usize;
        let half = Q::new(1, 2);
        for (ti, (start, h)) in self.bands[ci].iter().enumerate() {
            let top = -Q::from_integer(*start as i128) + half;
            let bot = -Q::from_integer((*start + *h) as i128) + half;
            if p.y <= top && p.y > bot {
                return Some((ci, ti));
            }
        }
        None
    }
}

/// Band allocation: stack each column's tangles top to bottom, giving a
/// tangle max(left ports, right ports) rows.
fn allocate_bands(v: &Validated) -> Vec<Vec<(usize, usize)>> {
    v.product
        .columns
        .iter()
        .map(|col| {
            let mut start = 1usize;
            col.iter()
                .map(|t| {
                    let (l, r) = t.arity();
                    let h = l.max(r).max(1);
                    let band = (start, h);
                    start += h;
                    band
                })
                .collect()
        })
        .collect()
}

fn row_y(row: usize) -> Q {
    -Q::from_integer(row as i128)
}

/// Drop duplicate and collinear-continuation points of a closed polyline.
fn simplify_closed(pts: Vec<Pt>) -> Vec<Pt> {
    let mut out: Vec<Pt> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last() == Some(&p) {
            continue;
        }
        out.push(p);
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    // Remove collinear middles, cyclically.
    let mut changed = true;
    while changed && out.len() > 3 {
        changed = false;
        let n = out.len();
        for i in 0..n {
            let a = out[(i + n - 1) % n].clone();
            let b = out[i].clone();
            let c = out[(i + 1) % n].clone();
            let d1 = Dir::between(&a, &b);
            let d2 = Dir::between(&b, &c);
            if d1.cross(&d2) == 0 && d1.dot(&d2) > 0 {
                out.remove(i);
                changed = true;
                break;
            }
        }
    }
    out
}

/// Build the doubled oriented divide.
pub fn double(v: &Validated) -> Result<OrientedDivide, GeometryError> {
    let w = Q::new(1, RAIL_HALF_WIDTH_DEN);
    let bands = allocate_bands(v);
    let ncols = v.product.columns.len();
    let third = Q::new(1, 3);

    // Template paths per tangle, with box coordinates filled in.
    // Key for joins: (column, tangle, side, port, rail).
    type Key = (usize, usize, u8, usize, Rail);
    let mut paths: Vec<(Key, Key, Vec<Pt>)> = Vec::new();
    for (ci, col) in v.product.columns.iter().enumerate() {
        for (ti, t) in col.iter().enumerate() {
            let (start, _h) = bands[ci][ti];
            let (l, r) = t.arity();
            let left_ys: Vec<Q> = (0..l).map(|m| row_y(start + m)).collect();
            let right_ys: Vec<Q> = (0..r).map(|m| row_y(start + m)).collect();
            let x0 = Q::from_integer(ci as i128) + third;
            let x1 = Q::from_integer(ci as i128) + third * 2;
            for RailPath { entry, exit, pts } in
                template_paths(t, x0, x1, &left_ys, &right_ys, w, ti)
            {
                let k = |p: PortRail| (ci, ti, p.side, p.port, p.rail);
                paths.push((k(entry), k(exit), pts));
            }
        }
    }

    // Wires across each gap: map from a template exit key to
    // (polyline, entry key of the next template path).
    let mut wires: BTreeMap<Key, (Vec<Pt>, Key)> = BTreeMap::new();
    for (g, gap_wires) in v.routing.iter().enumerate() {
        for (k, wire) in gap_wires.iter().enumerate() {
            let (fc, ft) = wire.from.tangle;
            let (tc, tt) = wire.to.tangle;
            let ys = row_y(bands[fc][ft].0 + wire.from.port);
            let yd = row_y(bands[tc][tt].0 + wire.to.port);
            let yg = row_y(k + 1);
            let xa = Q::from_integer(g as i128) + third * 2;
            let xm = Q::from_integer(g as i128 + 1);
            let xb = Q::from_integer(g as i128 + 1) + third;
            for rail in [Rail::Up, Rail::Down] {
                let off = if rail == Rail::Up { w } else { -w };
                let pts = vec![
                    Pt::new(xa, ys + off),
                    Pt::new(xm, yg + off),
                    Pt::new(xb, yd + off),
                ];
                match rail {
                    Rail::Up => {
                        // Eastward: from (col g, right face) to (col g+1, left face).
                        let from = (fc, ft, 1u8, wire.from.port, rail);
                        let to = (tc, tt, 0u8, wire.to.port, rail);
                        wires.insert(from, (pts, to));
                    }
                    Rail::Down => {
                        // Westward.
                        let from = (tc, tt, 0u8, wire.to.port, rail);
                        let to = (fc, ft, 1u8, wire.from.port, rail);
                        let rev: Vec<Pt> = pts.into_iter().rev().collect();
                        wires.insert(from, (rev, to));
                    }
                }
            }
        }
    }

    // Walk cycles: template path -> wire -> template path -> ...
    let by_entry: BTreeMap<Key, usize> = paths
        .iter()
        .enumerate()
        .map(|(i, (e, _, _))| (*e, i))
        .collect();
    let mut used = vec![false; paths.len()];
    let mut curves = Vec::new();
    for start in 0..paths.len() {
        if used[start] {
            continue;
        }
        let mut pts: Vec<Pt> = Vec::new();
        let mut cur = start;
        loop {
            used[cur] = true;
            pts.extend(paths[cur].2.iter().cloned());
            let exit = paths[cur].1;
            let (wire_pts, next_entry) = wires
                .get(&exit)
                .expect("validated product closes every rail");
            pts.extend(wire_pts.iter().cloned());
            let next = by_entry[next_entry];
            if next == start {
                break;
            }
            debug_assert!(!used[next], "rail cycles must be disjoint");
            cur = next;
        }
        curves.push(PlCurve::new(simplify_closed(pts)));
    }

    Ok(OrientedDivide {
        curves,
        bands,
        ncols,
        w,
    })
}

/// Corner winding events of one curve as (corner index, orientation):
/// +1 for an increasing-argument passage through straight down,
/// -1 for a decreasing one.
pub fn winding_event_corners(curve: &PlCurve) -> Vec<(usize, i8)> {
    let down = Dir { dx: 0, dy: -1 };
    let n = curve.len();
    let mut out = Vec::new();
    for i in 0..n {
        let din = curve.seg_dir((i + n - 1) % n);
        let dout = curve.seg_dir(i);
        let c = din.cross(&dout);
        if c > 0 {
            if din.cross(&down) > 0 && down.cross(&dout) > 0 {
                out.push((i, 1));
            }
        } else if c < 0 {
            if din.cross(&down) < 0 && down.cross(&dout) < 0 {
                out.push((i, -1));
            }
        }
    }
    out
}

/// Corner winding events of one curve: (corner point, orientation).
pub fn winding_events(curve: &PlCurve) -> Vec<(Pt, i8)> {
    winding_event_corners(curve)
        .into_iter()
        .map(|(i, o)| (curve.pts[i].clone(), o))
        .collect()
}

/// A transverse crossing between two curve segments.
#[derive(Clone, Debug)]
pub struct RawCrossing {
    pub p: Pt,
    pub c1: usize,
    pub s1: usize,
    pub d1: Dir,
    pub c2: usize,
    pub s2: usize,
    pub d2: Dir,
}

/// Full genericity report over a curve family.
pub struct GenericityReport {
    pub crossings: Vec<RawCrossing>,
    /// (curve, corner point, orientation) winding events.
    pub windings: Vec<(usize, Pt, i8)>,
}

fn fail(kind: &str, p: &Pt) -> GeometryError {
    GeometryError::Genericity {
        kind: kind.to_string(),
        x: p.x.to_string(),
        y: p.y.to_string(),
    }
}

/// Collect all pairwise transverse crossings of a curve family,
/// rejecting every non-generic contact. `vertical_ok` exempts segments
/// whose over/under is forced externally (materialized cut strands).
fn collect_crossings(
    curves: &[PlCurve],
    vertical_ok: &dyn Fn(usize, usize) -> bool,
) -> Result<Vec<RawCrossing>, GeometryError> {
    for (ci, c) in curves.iter().enumerate() {
        for i in c.segments() {
            let d = c.seg_dir(i);
            if d.dx == 0 && !vertical_ok(ci, i) {
                let (a, _) = c.seg(i);
                return Err(fail("vertical segment", a));
            }
        }
    }

    // Bounding boxes per segment for the pair sweep.
    struct SegRef {
        c: usize,
        s: usize,
        a: Pt,
        b: Pt,
        lox: Q,
        hix: Q,
        loy: Q,
        hiy: Q,
    }
    let mut segs = Vec::new();
    for (ci, c) in curves.iter().enumerate() {
        for i in c.segments() {
            let (a, b) = c.seg(i);
            let (lox, hix) = if a.x <= b.x {
                (a.x, b.x)
            } else {
                (b.x, a.x)
            };
            let (loy, hiy) = if a.y <= b.y {
                (a.y, b.y)
            } else {
                (b.y, a.y)
            };
            segs.push(SegRef {
                c: ci,
                s: i,
                a: a.clone(),
                b: b.clone(),
                lox,
                hix,
                loy,
                hiy,
            });
        }
    }

    let mut crossings: Vec<RawCrossing> = Vec::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (p, q) = (&segs[i], &segs[j]);
            if p.hix < q.lox || q.hix < p.lox || p.hiy < q.loy || q.hiy < p.loy {
                continue;
            }
            if p.c == q.c {
                let n = curves[p.c].len();
                let adjacent = (p.s + 1) % n == q.s || (q.s + 1) % n == p.s;
                if adjacent {
                    continue;
                }
            }
            match seg_intersect(&p.a, &p.b, &q.a, &q.b) {
                SegMeet::None => {}
                SegMeet::Improper => {
                    return Err(fail("non-transverse contact", &p.a));
                }
                SegMeet::Proper(x) => crossings.push(RawCrossing {
                    p: x,
                    c1: p.c,
                    s1: p.s,
                    d1: Dir::between(&p.a, &p.b),
                    c2: q.c,
                    s2: q.s,
                    d2: Dir::between(&q.a, &q.b),
                }),
            }
        }
    }

    // Crossing points pairwise distinct (two branches per point).
    let mut pts: Vec<&Pt> = crossings.iter().map(|c| &c.p).collect();
    pts.sort();
    for w in pts.windows(2) {
        if w[0] == w[1] {
            return Err(fail("more than two branches through a point", w[0]));
        }
    }
    // No corner coincides with a crossing.
    for c in curves {
        for v in &c.pts {
            if crossings.iter().any(|x| &x.p == v) {
                return Err(fail("corner at a crossing", v));
            }
        }
    }

    Ok(crossings)
}

/// Validate transversality and collect crossings and winding events.
///
/// Checks: no segment points straight down or up, all intersections are
/// proper interior crossings, crossing points are pairwise distinct,
/// no corner coincides with a crossing, and winding-event corners do
/// not lie on any other curve.
pub fn genericity_check(curves: &[PlCurve]) -> Result<GenericityReport, GeometryError> {
    let crossings = collect_crossings(curves, &|_, _| false)?;

    let mut windings = Vec::new();
    for (ci, c) in curves.iter().enumerate() {
        for (p, orient) in winding_events(c) {
            // Cut points must avoid every other curve.
            for (cj, other) in curves.iter().enumerate() {
                if ci != cj && point_on_curve(other, &p) {
                    return Err(fail("winding corner on another curve", &p));
                }
            }
            windings.push((ci, p, orient));
        }
    }

    Ok(GenericityReport {
        crossings,
        windings,
    })
}

/// Over/under authority for a segment of a materialized diagram.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SegTag {
    /// Resolve crossings by the tangent-direction rule.
    Regular,
    /// A cut strand on its way around the back: under everything.
    ForcedUnder,
    /// A cut strand coming back over everything.
    ForcedOver,
}

/// Curves whose segments carry over/under tags; the honest diagram of a
/// doubled divide after the winding-rule cuts are drawn as real strands.
#[derive(Clone, Debug)]
pub struct TaggedCurves {
    pub curves: Vec<PlCurve>,
    /// tags[c][s] tags the segment from vertex s to s+1 of curve c.
    pub tags: Vec<Vec<SegTag>>,
}

impl TaggedCurves {
    /// Crossings of the tagged family; also rejects any crossing between
    /// two forced strands (hairpins must stay disjoint from each other).
    pub fn crossings(&self) -> Result<Vec<RawCrossing>, GeometryError> {
        let raw = collect_crossings(&self.curves, &|c, s| self.tags[c][s] != SegTag::Regular)?;
        for rc in &raw {
            if self.tags[rc.c1][rc.s1] != SegTag::Regular
                && self.tags[rc.c2][rc.s2] != SegTag::Regular
            {
                return Err(fail("cut strands crossing each other", &rc.p));
            }
        }
        Ok(raw)
    }
}

/// Draw every winding cut as a real detour: at each cut corner the
/// strand leaves for a hairpin below the whole picture, one leg under
/// everything and the other over everything (which leg is which follows
/// the cut's orientation). Curve identities and planar crossings of the
/// regular strands are unchanged.
pub fn materialize_cuts(curves: &[PlCurve]) -> Result<TaggedCurves, GeometryError> {
    let base_crossings = collect_crossings(curves, &|_, _| false)?;

    let mut ymin = curves[0].pts[0].y;
    for c in curves {
        for p in &c.pts {
            if p.y < ymin {
                ymin = p.y;
            }
        }
    }

    // Jitter candidates for the hairpin splice, tried until the result
    // passes its own genericity audit. Cut corners have pairwise distinct
    // x by template construction, so the legs can drop vertically; the
    // jitter only dodges accidental vertex alignments further down.
    let jitters: [(i128, i128); 6] = [
        (0, 1),
        (1, 4096),
        (-1, 4096),
        (1, 2048),
        (3, 4096),
        (-3, 4096),
    ];
    'attempt: for (jn, jd) in jitters {
        let jitter = Q::new(jn, jd);
        let mut out_curves = Vec::with_capacity(curves.len());
        let mut out_tags = Vec::with_capacity(curves.len());
        let mut hairpin_count = 0i128;
        for (ci, curve) in curves.iter().enumerate() {
            let cuts: BTreeMap<usize, i8> = winding_event_corners(curve).into_iter().collect();
            let n = curve.len();
            let mut pts: Vec<Pt> = Vec::with_capacity(n + 4 * cuts.len());
            let mut tags: Vec<SegTag> = Vec::new();
            for i in 0..n {
                let p = curve.pts[i].clone();
                match cuts.get(&i) {
                    None => {
                        pts.push(p);
                        tags.push(SegTag::Regular);
                    }
                    Some(&orient) => {
                        let depth = ymin - Q::from_integer(2) - Q::new(hairpin_count, 8);
                        hairpin_count += 1;
                        // Point a little way along the outgoing segment,
                        // before its first crossing.
                        let q = &curve.pts[(i + 1) % n];
                        let mut t = Q::new(1, 1024);
                        let d = curve.seg_dir(i);
                        let (o, _) = curve.seg(i);
                        for rc in &base_crossings {
                            for (cc, ss, pp) in
                                [(rc.c1, rc.s1, &rc.p), (rc.c2, rc.s2, &rc.p)]
                            {
                                if cc == ci && ss == i {
                                    // Parameter of the crossing along the segment.
                                    let num = (pp.x - o.x) * Q::from_integer(d.dx)
                                        + (pp.y - o.y) * Q::from_integer(d.dy);
                                    let den = (q.x - o.x) * Q::from_integer(d.dx)
                                        + (q.y - o.y) * Q::from_integer(d.dy);
                                    let param = num / den;
                                    if param <= t {
                                        t = param / Q::from_integer(2);
                                    }
                                }
                            }
                        }
                        let p2 = Pt::new(p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t);
                        let (out_tag, back_tag) = if orient > 0 {
                            (SegTag::ForcedUnder, SegTag::ForcedOver)
                        } else {
                            (SegTag::ForcedOver, SegTag::ForcedUnder)
                        };
                        let xa = p.x + jitter;
                        let xb = p2.x + jitter;
                        if xa == xb {
                            continue 'attempt;
                        }
                        pts.push(p.clone());
                        tags.push(out_tag); // p -> (xa, depth)
                        pts.push(Pt::new(xa, depth));
                        tags.push(out_tag); // across the bottom
                        pts.push(Pt::new(xb, depth));
                        tags.push(back_tag); // up to p2
                        pts.push(p2);
                        tags.push(SegTag::Regular); // rest of the segment
                    }
                }
            }
            out_curves.push(PlCurve::new(pts));
            out_tags.push(tags);
        }
        let tagged = TaggedCurves {
            curves: out_curves,
            tags: out_tags,
        };
        if tagged.crossings().is_ok() {
            return Ok(tagged);
        }
    }
    Err(GeometryError::TemplateGenericity)
}

/// Round to the nearest multiple of 1/2^12; keeps every later
/// computation's denominators bounded.
fn dyadic_round(q: Q) -> Q {
    let scale: i128 = 1 << 12;
    let scaled = q * Q::from_integer(scale);
    let num = scaled.numer() * 2 + scaled.denom().signum() * scaled.denom();
    let rounded = num.div_euclid(2 * scaled.denom());
    Q::new(rounded, scale)
}

/// Push a curve off to its side by a small gauge eta.
///
/// Each segment line moves along its normal (left of the orientation by
/// default); consecutive moved lines meet at mitered corners, which are
/// then snapped to a dyadic grid so denominators stay bounded downstream.
/// The caller validates the result (crossing pattern and winding events)
/// and retries with a smaller gauge on any degeneracy.
pub fn offset_curve(curve: &PlCurve, eta: Q, side: OffsetSide) -> Result<PlCurve, GeometryError> {
    let n = curve.len();
    let sgn = match side {
        OffsetSide::Left => Q::from_integer(1),
        OffsetSide::Right => Q::from_integer(-1),
    };
    // Shift vector per segment: eta * (-dy, dx) / (|dx| + |dy|).
    let shift = |i: usize| -> (Q, Q) {
        let d = curve.seg_dir(i);
        let l1 = Q::from_integer(d.dx.abs() + d.dy.abs());
        let f = sgn * eta / l1;
        (-Q::from_integer(d.dy) * f, Q::from_integer(d.dx) * f)
    };
    let mut out: Vec<Pt> = Vec::with_capacity(n);
    for i in 0..n {
        // Corner i joins segment i-1 and segment i.
        let h = (i + n - 1) % n;
        let (ax, ay) = shift(h);
        let (bx, by) = shift(i);
        let (p0, _) = curve.seg(h);
        let (q0, _) = curve.seg(i);
        let a0 = Pt::new(p0.x + ax, p0.y + ay);
        let b0 = Pt::new(q0.x + bx, q0.y + by);
        let da = curve.seg_dir(h);
        let db = curve.seg_dir(i);
        let den = Q::from_integer(da.cross(&db));
        if den.is_zero() {
            return Err(GeometryError::OffsetDegeneracy);
        }
        let t = ((b0.x - a0.x) * Q::from_integer(db.dy)
            - (b0.y - a0.y) * Q::from_integer(db.dx))
            / den;
        let mx = a0.x + Q::from_integer(da.dx) * t;
        let my = a0.y + Q::from_integer(da.dy) * t;
        let p = Pt::new(dyadic_round(mx), dyadic_round(my));
        if out.last() == Some(&p) {
            return Err(GeometryError::OffsetDegeneracy);
        }
        out.push(p);
    }
    if out.first() == out.last() || out.len() < 3 {
        return Err(GeometryError::OffsetDegeneracy);
    }
    Ok(PlCurve::new(out))
}

/// Offset a whole divide; retries with halved gauge if the result
/// degenerates or changes the expected crossing or winding pattern.
pub fn offset(d: &OrientedDivide, side: OffsetSide) -> Result<OrientedDivide, GeometryError> {
    let base = genericity_check(&d.curves)?;
    let self_crossings = base.crossings.len();
    let base_windings = winding_census(&base.windings);
    let mut eta = d.w / Q::from_integer(4);
    for _attempt in 0..4 {
        let mut curves = Vec::with_capacity(d.curves.len());
        let mut ok = true;
        for c in &d.curves {
            match offset_curve(c, eta, side) {
                Ok(oc) => curves.push(oc),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            // The union must stay generic; the copy must reproduce the
            // original's crossing count and winding inventory; and each
            // original self-crossing must spawn exactly two crossings
            // between the copies.
            let mut union: Vec<PlCurve> = d.curves.clone();
            union.extend(curves.iter().cloned());
            if let Ok(rep) = genericity_check(&union) {
                let nd = d.curves.len();
                let mut self_off = 0usize;
                let mut inter = 0usize;
                for c in &rep.crossings {
                    let a = c.c1 < nd;
                    let b = c.c2 < nd;
                    if !a && !b {
                        self_off += 1;
                    } else if a != b {
                        inter += 1;
                    }
                }
                let off_windings: Vec<(usize, Pt, i8)> = rep
                    .windings
                    .iter()
                    .filter(|(c, _, _)| *c >= nd)
                    .map(|(c, p, o)| (*c - nd, p.clone(), *o))
                    .collect();
                if self_off == self_crossings
                    && inter == 2 * self_crossings
                    && winding_census(&off_windings) == base_windings
                {
                    return Ok(OrientedDivide {
                        curves,
                        bands: d.bands.clone(),
                        ncols: d.ncols,
                        w: d.w,
                    });
                }
            }
        }
        eta = eta / Q::from_integer(2);
    }
    Err(GeometryError::OffsetDegeneracy)
}

/// Winding events per curve and orientation, for comparing inventories.
fn winding_census(events: &[(usize, Pt, i8)]) -> Vec<(usize, i64, i64)> {
    let mut per: BTreeMap<usize, (i64, i64)> = BTreeMap::new();
    for (c, _, o) in events {
        let e = per.entry(*c).or_insert((0, 0));
        if *o > 0 {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    per.into_iter().map(|(c, (a, b))| (c, a, b)).collect()
}

/// Doubled curves of a divide together with their push-off copy:
/// returns the combined family and how many curves belong to the
/// original (the first `n` entries).
pub fn build_union(
    v: &Validated,
    side: OffsetSide,
) -> Result<(Vec<PlCurve>, usize), GeometryError> {
    let d = double(v)?;
    let off = offset(&d, side)?;
    let nd = d.curves.len();
    let mut union = d.curves;
    union.extend(off.curves);
    Ok((union, nd))
}

/// Sketch of the divide itself (not doubled), for rendering.
pub struct DivideSketch {
    pub strands: Vec<Vec<Pt>>,
    pub vertices: Vec<Pt>,
    pub double_points: Vec<Pt>,
}

pub fn layout(v: &Validated) -> DivideSketch {
    let bands = allocate_bands(v);
    let third = Q::new(1, 3);
    let mut strands = Vec::new();
    let mut vertices = Vec::new();
    let mut double_points = Vec::new();

    for (ci, col) in v.product.columns.iter().enumerate() {
        for (ti, t) in col.iter().enumerate() {
            let (start, _) = bands[ci][ti];
            let x0 = Q::from_integer(ci as i128) + third;
            let x1 = Q::from_integer(ci as i128) + third * 2;
            let xf = |num: i128, den: i128| x0 + (x1 - x0) * Q::new(num, den);
            let y = |m: usize| row_y(start + m);
            match t {
                TangleKind::IdentityStrand => {
                    strands.push(vec![Pt::new(x0, y(0)), Pt::new(x1, y(0))]);
                }
                TangleKind::DoublePoint => {
                    strands.push(vec![Pt::new(x0, y(0)), Pt::new(x1, y(1))]);
                    strands.push(vec![Pt::new(x0, y(1)), Pt::new(x1, y(0))]);
                    double_points.push(Pt::new(
                        (x0 + x1) / Q::from_integer(2),
                        (y(0) + y(1)) / Q::from_integer(2),
                    ));
                }
                TangleKind::LeftEndpoint(_) => {
                    let vx = xf(35, 100);
                    strands.push(vec![Pt::new(vx, y(0)), Pt::new(x1, y(0))]);
                    vertices.push(Pt::new(vx, y(0)));
                }
                TangleKind::RightEndpoint(_) => {
                    let vx = xf(65, 100);
                    strands.push(vec![Pt::new(x0, y(0)), Pt::new(vx, y(0))]);
                    vertices.push(Pt::new(vx, y(0)));
                }
                TangleKind::LeftFold => {
                    strands.push(vec![
                        Pt::new(x1, y(0)),
                        Pt::new(xf(25, 100), y(0)),
                        Pt::new(xf(15, 100), (y(0) + y(1)) / Q::from_integer(2)),
                        Pt::new(xf(25, 100), y(1)),
                        Pt::new(x1, y(1)),
                    ]);
                }
                TangleKind::RightFold => {
                    strands.push(vec![
                        Pt::new(x0, y(0)),
                        Pt::new(xf(75, 100), y(0)),
                        Pt::new(xf(85, 100), (y(0) + y(1)) / Q::from_integer(2)),
                        Pt::new(xf(75, 100), y(1)),
                        Pt::new(x0, y(1)),
                    ]);
                }
                TangleKind::BranchPlus(b) => {
                    let vx = xf(25, 100);
                    vertices.push(Pt::new(vx, y(0)));
                    strands.push(vec![Pt::new(x0, y(0)), Pt::new(x1, y(0))]);
                    for i in 1..*b as usize - 1 {
                        strands.push(vec![
                            Pt::new(vx, y(0)),
                            Pt::new(xf(55, 100), y(i)),
                            Pt::new(x1, y(i)),
                        ]);
                    }
                }
                TangleKind::BranchMinus(b) => {
                    let vx = xf(75, 100);
                    vertices.push(Pt::new(vx, y(0)));
                    strands.push(vec![Pt::new(x0, y(0)), Pt::new(x1, y(0))]);
                    for i in 1..*b as usize - 1 {
                        strands.push(vec![
                            Pt::new(vx, y(0)),
                            Pt::new(xf(45, 100), y(i)),
                            Pt::new(x0, y(i)),
                        ]);
                    }
                }
            }
        }
    }

    // Wire strands between columns.
    for (g, gap_wires) in v.routing.iter().enumerate() {
        for (k, wire) in gap_wires.iter().enumerate() {
            let (fc, ft) = wire.from.tangle;
            let (tc, tt) = wire.to.tangle;
            let ys = row_y(bands[fc][ft].0 + wire.from.port);
            let yd = row_y(bands[tc][tt].0 + wire.to.port);
            let yg = row_y(k + 1);
            let xa = Q::from_integer(g as i128) + third * 2;
            let xm = Q::from_integer(g as i128 + 1);
            let xb = Q::from_integer(g as i128 + 1) + third;
            strands.push(vec![Pt::new(xa, ys), Pt::new(xm, yg), Pt::new(xb, yd)]);
        }
    }

    DivideSketch {
        strands,
        vertices,
        double_points,
    }
}

/// Order two crossings along a segment by their parameter.
pub fn along_segment_cmp(a: &Pt, origin: &Pt, d: &Dir, b: &Pt) -> Ordering {
    let ta = (a.x - origin.x) * Q::from_integer(d.dx) + (a.y - origin.y) * Q::from_integer(d.dy);
    let tb = (b.x - origin.x) * Q::from_integer(d.dx) + (b.y - origin.y) * Q::from_integer(d.dy);
    ta.cmp(&tb)
}

/// The winding-rule correction to a linking number between two disjoint
/// curve families: each cut (a corner sweeping through straight down) of
/// one family contributes the winding number of the other family around
/// the cut point, weighted -1 for increasing-argument cuts and +1 for
/// decreasing ones.
pub fn winding_correction(own: &[PlCurve], other: &[PlCurve]) -> i64 {
    let mut total = 0i64;
    for c in own {
        for (p, orient) in winding_events(c) {
            let w: i64 = other.iter().map(|oc| winding_number(oc, &p)).sum();
            total += -(orient as i64) * w;
        }
    }
    total
}

/// Sign of a resolved crossing: +1 when (over, under) is a positively
/// oriented frame.
pub fn crossing_sign(over: &Dir, under: &Dir) -> i64 {
    let c = over.cross(under);
    if c > 0 {
        1
    } else {
        -1
    }
}

/// Resolve which branch of a raw crossing is over: true if branch 1.
pub fn branch1_over(rc: &RawCrossing) -> Result<bool, GeometryError> {
    match direction_cmp(&rc.d1, &rc.d2) {
        Ok(Ordering::Less) => Ok(true),
        Ok(Ordering::Greater) => Ok(false),
        Ok(Ordering::Equal) => Err(GeometryError::Genericity {
            kind: "equal direction keys at a crossing".into(),
            x: rc.p.x.to_string(),
            y: rc.p.y.to_string(),
        }),
        Err(_) => Err(GeometryError::Genericity {
            kind: "downward tangent at a crossing".into(),
            x: rc.p.x.to_string(),
            y: rc.p.y.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::tangle::trace_doubled_components;
    use crate::templates::{template_self_crossings, template_winding_events};

    fn doubled(src: &str) -> OrientedDivide {
        double(&parse(src).unwrap()).unwrap()
    }

    #[test]
    fn component_counts_match_the_combinatorial_trace() {
        for src in [
            "<+ | >+",
            "( | )",
            "( | X | >+ >+",
            "( | B-3 | >+",
            "<+ | B+3 | >+ >+",
            "( ( | B-5 | >+",
            "<+ | B+4 | X - | >- >+ >+",
        ] {
            let v = parse(src).unwrap();
            let d = double(&v).unwrap();
            assert_eq!(
                d.curves.len(),
                trace_doubled_components(&v),
                "mu mismatch for {src}"
            );
        }
    }

    #[test]
    fn self_crossing_census_is_four_delta_plus_template_constants() {
        for src in [
            "<+ | >+",
            "( | )",
            "( | X | >+ >+",
            "<+ | B+3 | >+ >+",
            "( | B-3 | >-",
        ] {
            let v = parse(src).unwrap();
            let d = double(&v).unwrap();
            let rep = genericity_check(&d.curves).unwrap();
            let expected: usize = v
                .product
                .columns
                .iter()
                .flatten()
                .map(template_self_crossings)
                .sum();
            assert_eq!(rep.crossings.len(), expected, "crossings for {src}");
        }
    }

    #[test]
    fn winding_event_census_matches_the_template_table() {
        for src in ["<+ | >+", "( | )", "<- | >-", "<+ | B+4 | >+ >+ >+", "( | B-3 | >+"] {
            let v = parse(src).unwrap();
            let d = double(&v).unwrap();
            let rep = genericity_check(&d.curves).unwrap();
            let (mut inc, mut dec) = (0usize, 0usize);
            for (_, _, o) in &rep.windings {
                if *o > 0 {
                    inc += 1;
                } else {
                    dec += 1;
                }
            }
            let (mut einc, mut edec) = (0usize, 0usize);
            for t in v.product.columns.iter().flatten() {
                let (a, b) = template_winding_events(t);
                einc += a;
                edec += b;
            }
            assert_eq!((inc, dec), (einc, edec), "winding events for {src}");
        }
    }

    #[test]
    fn minus_left_endpoint_cell_has_no_winding_events() {
        let v = parse("<- | >-").unwrap();
        let d = double(&v).unwrap();
        let rep = genericity_check(&d.curves).unwrap();
        for (_, p, _) in &rep.windings {
            // The only winding event of this divide sits in the right
            // endpoint cell (column 1).
            let cell = d.cell_of(p).expect("winding corners live in cells");
            assert_eq!(cell.0, 1);
        }
    }

    #[test]
    fn offset_is_disjoint_from_original_when_embedded() {
        let d = doubled("<+ | >+");
        let off = offset(&d, OffsetSide::Left).unwrap();
        let mut union = d.curves.clone();
        union.extend(off.curves.clone());
        let rep = genericity_check(&union).unwrap();
        // Interval: one self-crossing per plus endpoint cell in each copy,
        // plus two spawned inter-copy crossings per self-crossing.
        assert_eq!(rep.crossings.len(), 2 + 2 + 4);
        let d2 = doubled("( | )");
        let off2 = offset(&d2, OffsetSide::Left).unwrap();
        let mut union2 = d2.curves.clone();
        union2.extend(off2.curves.clone());
        let rep2 = genericity_check(&union2).unwrap();
        assert_eq!(rep2.crossings.len(), 0);
    }
}
