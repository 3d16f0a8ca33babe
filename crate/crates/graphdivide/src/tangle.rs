//! Tangle kinds, product validation, feature counts, the abstract graph,
//! and the closed-form invariants derived from them.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// The seven tangle kinds (endpoints carry a sign; branches carry a sign
/// and a valence), plus the plain strand.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TangleKind {
    LeftEndpoint(Sign),
    RightEndpoint(Sign),
    LeftFold,
    RightFold,
    BranchPlus(u32),
    BranchMinus(u32),
    DoublePoint,
    IdentityStrand,
}

use TangleKind::*;

impl TangleKind {
    /// (left ports, right ports).
    pub fn arity(&self) -> (usize, usize) {
        match self {
            LeftEndpoint(_) => (0, 1),
            RightEndpoint(_) => (1, 0),
            LeftFold => (0, 2),
            RightFold => (2, 0),
            BranchPlus(b) => (1, *b as usize - 1),
            BranchMinus(b) => (*b as usize - 1, 1),
            DoublePoint => (2, 2),
            IdentityStrand => (1, 1),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, IdentityStrand)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleProduct {
    /// Columns left to right; tangles in a column top to bottom.
    pub columns: Vec<Vec<TangleKind>>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ValidateError {
    #[error("column {column}: arity mismatch, expected {expected} strands from the left, found {found} left ports")]
    ArityMismatch {
        column: usize,
        expected: usize,
        found: usize,
    },
    #[error("empty product (no columns, an empty column, or identity strands only)")]
    EmptyProduct,
    #[error("column {column}: branch tangle of valence {valence} (valence must be >= 3)")]
    BadValence { column: usize, valence: u32 },
    #[error("open boundary: {side} column has {ports} unmatched {side_ports} ports")]
    OpenBoundary {
        side: &'static str,
        side_ports: &'static str,
        ports: usize,
    },
}

/// A tangle's address: column index and index within the column.
pub type TangleId = (usize, usize);

/// One strand gap between columns; strands are numbered top to bottom.
/// `routing[g][k]` says which tangle ports strand `k` of gap `g` connects:
/// (right port of a column-g tangle) -> (left port of a column-g+1 tangle).
#[derive(Clone, Debug)]
pub struct PortRef {
    pub tangle: TangleId,
    /// Index among that tangle's left or right ports, top to bottom.
    pub port: usize,
}

#[derive(Clone, Debug)]
pub struct StrandWire {
    pub from: PortRef,
    pub to: PortRef,
}

/// A validated product together with its strand routing table.
#[derive(Clone, Debug)]
pub struct Validated {
    pub product: TangleProduct,
    /// routing[g] = wires crossing the gap between column g and g+1.
    pub routing: Vec<Vec<StrandWire>>,
}

pub fn validate_product(raw: &TangleProduct) -> Result<Validated, ValidateError> {
    if raw.columns.is_empty() || raw.columns.iter().any(|c| c.is_empty()) {
        return Err(ValidateError::EmptyProduct);
    }
    if raw
        .columns
        .iter()
        .all(|c| c.iter().all(|t| t.is_identity()))
    {
        return Err(ValidateError::EmptyProduct);
    }
    for (ci, col) in raw.columns.iter().enumerate() {
        for t in col {
            if let BranchPlus(b) | BranchMinus(b) = t {
                if *b < 3 {
                    return Err(ValidateError::BadValence {
                        column: ci,
                        valence: *b,
                    });
                }
            }
        }
    }

    let left_ports = |col: &[TangleKind]| -> usize { col.iter().map(|t| t.arity().0).sum() };
    let right_ports = |col: &[TangleKind]| -> usize { col.iter().map(|t| t.arity().1).sum() };

    let first = left_ports(&raw.columns[0]);
    if first != 0 {
        return Err(ValidateError::OpenBoundary {
            side: "first",
            side_ports: "left",
            ports: first,
        });
    }

    let mut routing = Vec::new();
    for ci in 0..raw.columns.len() - 1 {
        let out = right_ports(&raw.columns[ci]);
        let inp = left_ports(&raw.columns[ci + 1]);
        if out != inp {
            return Err(ValidateError::ArityMismatch {
                column: ci + 1,
                expected: out,
                found: inp,
            });
        }
        // Positional matching, top to bottom.
        let mut sources = Vec::with_capacity(out);
        for (ti, t) in raw.columns[ci].iter().enumerate() {
            for p in 0..t.arity().1 {
                sources.push(PortRef {
                    tangle: (ci, ti),
                    port: p,
                });
            }
        }
        let mut sinks = Vec::with_capacity(inp);
        for (ti, t) in raw.columns[ci + 1].iter().enumerate() {
            for p in 0..t.arity().0 {
                sinks.push(PortRef {
                    tangle: (ci + 1, ti),
                    port: p,
                });
            }
        }
        routing.push(
            sources
                .into_iter()
                .zip(sinks)
                .map(|(from, to)| StrandWire { from, to })
                .collect(),
        );
    }

    let last = right_ports(raw.columns.last().unwrap());
    if last != 0 {
        return Err(ValidateError::OpenBoundary {
            side: "last",
            side_ports: "right",
            ports: last,
        });
    }

    Ok(Validated {
        product: raw.clone(),
        routing,
    })
}

/// Tallies of the tangle kinds that enter the closed formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeatureCounts {
    pub e1: usize,
    pub e2: usize,
    pub f1: usize,
    pub f2: usize,
    pub plus_branch_valences: Vec<u32>,
    pub minus_branch_valences: Vec<u32>,
    pub delta: usize,
}

pub fn count_features(v: &Validated) -> FeatureCounts {
    let mut c = FeatureCounts::default();
    for col in &v.product.columns {
        for t in col {
            match t {
                LeftEndpoint(_) => c.e1 += 1,
                RightEndpoint(_) => c.e2 += 1,
                LeftFold => c.f1 += 1,
                RightFold => c.f2 += 1,
                BranchPlus(b) => c.plus_branch_valences.push(*b),
                BranchMinus(b) => c.minus_branch_valences.push(*b),
                DoublePoint => c.delta += 1,
                IdentityStrand => {}
            }
        }
    }
    c
}

/// chi(G) from the feature counts alone.
pub fn euler_from_counts(c: &FeatureCounts) -> i64 {
    let branch_sum: i64 = c
        .plus_branch_valences
        .iter()
        .map(|&b| b as i64 - 2)
        .sum();
    -(branch_sum - c.e2 as i64 + c.f1 as i64 - c.f2 as i64)
}

/// Per-tangle contribution table summed over the product; equals
/// 2*delta - chi(G) identically.
pub fn tb_from_counts(c: &FeatureCounts) -> i64 {
    let branch_sum: i64 = c
        .plus_branch_valences
        .iter()
        .map(|&b| b as i64 - 2)
        .sum();
    branch_sum - c.e2 as i64 + c.f1 as i64 - c.f2 as i64 + 2 * c.delta as i64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphEdge {
    /// Edge between two vertices; equal ids make a loop.
    Between(usize, usize),
    /// Closed strand that meets no vertex (a circle component of G).
    FreeCircle,
}

/// The source graph G recovered from the presentation. Endpoint and
/// branch tangles are the vertices; folds, strands and double points
/// are edge-interior.
#[derive(Clone, Debug)]
pub struct AbstractGraph {
    /// (id, valence, sign). Endpoints have valence 1.
    pub vertices: Vec<(usize, u32, Sign)>,
    pub edges: Vec<GraphEdge>,
    pub euler_direct: i64,
}

impl AbstractGraph {
    pub fn chi(&self) -> i64 {
        self.euler_direct
    }

    /// Component count of G and whether every component is a tree.
    pub fn components_and_acyclic(&self) -> (usize, bool) {
        let n = self.vertices.len();
        let mut dsu: Vec<usize> = (0..n).collect();
        fn find(dsu: &mut Vec<usize>, a: usize) -> usize {
            if dsu[a] != a {
                let r = find(dsu, dsu[a]);
                dsu[a] = r;
            }
            dsu[a]
        }
        let mut cycles = 0usize;
        let mut circles = 0usize;
        for e in &self.edges {
            match e {
                GraphEdge::Between(a, b) => {
                    let ra = find(&mut dsu, *a);
                    let rb = find(&mut dsu, *b);
                    if ra == rb {
                        cycles += 1;
                    } else {
                        dsu[ra] = rb;
                    }
                }
                GraphEdge::FreeCircle => circles += 1,
            }
        }
        let mut roots: Vec<usize> = (0..n).map(|i| find(&mut dsu, i)).collect();
        roots.sort_unstable();
        roots.dedup();
        (roots.len() + circles, cycles == 0 && circles == 0)
    }
}

/// Follow a strand through a non-vertex tangle: entering at (side, port),
/// where does it exit? `None` at endpoints and branches (the strand ends
/// at the vertex there). Note a fold's two ports sit on the same side.
fn strand_through_any(kind: &TangleKind, side: u8, port: usize) -> Option<(u8, usize)> {
    match kind {
        LeftEndpoint(_) | RightEndpoint(_) | BranchPlus(_) | BranchMinus(_) => None,
        IdentityStrand => Some((1 - side, 0)),
        DoublePoint => Some((1 - side, 1 - port)),
        LeftFold => Some((1, 1 - port)),
        RightFold => Some((0, 1 - port)),
    }
}

pub fn assemble_graph(v: &Validated) -> AbstractGraph {
    // Vertex ids for endpoint/branch tangles.
    let mut vert_ids: BTreeMap<TangleId, usize> = BTreeMap::new();
    let mut vertices = Vec::new();
    for (ci, col) in v.product.columns.iter().enumerate() {
        for (ti, t) in col.iter().enumerate() {
            let sv = match t {
                LeftEndpoint(s) | RightEndpoint(s) => Some((1u32, *s)),
                BranchPlus(b) => Some((*b, Sign::Plus)),
                BranchMinus(b) => Some((*b, Sign::Minus)),
                _ => None,
            };
            if let Some((val, s)) = sv {
                let id = vertices.len();
                vert_ids.insert((ci, ti), id);
                vertices.push((id, val, s));
            }
        }
    }

    // Port endpoints: (tangle, side, port) where side 0 = left, 1 = right.
    // Walk strands from each vertex port until another vertex port or a
    // closed loop is found.
    type PortKey = (usize, usize, u8, usize); // column, tangle, side, port
    let mut visited: std::collections::BTreeSet<PortKey> = Default::default();
    let mut edges = Vec::new();

    let kind_of = |id: TangleId| -> &TangleKind { &v.product.columns[id.0][id.1] };

    // Map a tangle-side-port to the wire it attaches to, if any.
    let wire_at = |id: TangleId, side: u8, port: usize| -> Option<(usize, usize)> {
        // Returns (gap index, wire index).
        let gap = if side == 1 { id.0 } else { id.0.checked_sub(1)? };
        let wires = v.routing.get(gap)?;
        for (wi, wire) in wires.iter().enumerate() {
            let pr = if side == 1 { &wire.from } else { &wire.to };
            if pr.tangle == id && pr.port == port {
                return Some((gap, wi));
            }
        }
        None
    };

    // Trace from (tangle, side, port) across the adjacent wire and through
    // tangles until hitting a vertex tangle port; marks all ports visited.
    let mut trace = |start: PortKey, visited: &mut std::collections::BTreeSet<PortKey>| -> Option<PortKey> {
        let mut cur = start;
        loop {
            visited.insert(cur);
            let (ci, ti, side, port) = cur;
            let (gap, wi) = wire_at((ci, ti), side, port)
                .expect("validated product has a wire at every interior port");
            let wire = &v.routing[gap][wi];
            let (nid, nport, nside) = if side == 1 {
                (wire.to.tangle, wire.to.port, 0u8)
            } else {
                (wire.from.tangle, wire.from.port, 1u8)
            };
            let nkey = (nid.0, nid.1, nside, nport);
            if visited.contains(&nkey) {
                return None; // closed loop
            }
            visited.insert(nkey);
            let nkind = kind_of(nid);
            match strand_through_any(nkind, nside, nport) {
                Some((oside, oport)) => {
                    let okey = (nid.0, nid.1, oside, oport);
                    if visited.contains(&okey) {
                        return None;
                    }
                    cur = okey;
                }
                None => return Some(nkey),
            }
        }
    };

    // Pass 1: edges starting at vertex ports.
    for (ci, col) in v.product.columns.iter().enumerate() {
        for (ti, t) in col.iter().enumerate() {
            if !vert_ids.contains_key(&(ci, ti)) {
                continue;
            }
            let (l, r) = t.arity();
            for (side, nports) in [(0u8, l), (1u8, r)] {
                for p in 0..nports {
                    let key = (ci, ti, side, p);
                    if visited.contains(&key) {
                        continue;
                    }
                    let a = vert_ids[&(ci, ti)];
                    match trace(key, &mut visited) {
                        Some((eci, eti, _, _)) => {
                            let b = vert_ids[&(eci, eti)];
                            edges.push(GraphEdge::Between(a, b));
                        }
                        None => {
                            // Can't happen from a vertex port: the walk ends
                            // at some vertex since it started at one and the
                            // strand is finite. Treat defensively as loop.
                            edges.push(GraphEdge::Between(a, a));
                        }
                    }
                }
            }
        }
    }

    // Pass 2: circles that touch no vertex.
    for (ci, col) in v.product.columns.iter().enumerate() {
        for (ti, t) in col.iter().enumerate() {
            if vert_ids.contains_key(&(ci, ti)) {
                continue;
            }
            let (l, r) = t.arity();
            for (side, nports) in [(0u8, l), (1u8, r)] {
                for p in 0..nports {
                    let key = (ci, ti, side, p);
                    if visited.contains(&key) {
                        continue;
                    }
                    // Follow the closed strand, marking everything.
                    let res = trace(key, &mut visited);
                    debug_assert!(res.is_none(), "untouched strand must be closed");
                    edges.push(GraphEdge::FreeCircle);
                }
            }
        }
    }

    let between = edges
        .iter()
        .filter(|e| matches!(e, GraphEdge::Between(_, _)))
        .count() as i64;
    let euler_direct = vertices.len() as i64 - between;

    AbstractGraph {
        vertices,
        edges,
        euler_direct,
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SliceError {
    #[error("(2 - mu - chi_s) is odd, internal inconsistency")]
    NonIntegerGenus,
}

/// Slice Euler characteristic and 4-genus.
/// chi_s = chi(G) - 2 delta; g_s = (2 - mu - chi_s) / 2.
pub fn slice_invariants(
    graph: &AbstractGraph,
    counts: &FeatureCounts,
    mu: usize,
) -> Result<(i64, num::rational::Ratio<i64>), SliceError> {
    let chi_s = graph.euler_direct - 2 * counts.delta as i64;
    let num = 2 - mu as i64 - chi_s;
    if num % 2 != 0 {
        return Err(SliceError::NonIntegerGenus);
    }
    Ok((chi_s, num::rational::Ratio::new(num, 2)))
}

/// Rail side of a port: each strand-port carries the two parallel curves
/// of the doubling, one just above the strand and one just below.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Rail {
    Up,
    Down,
}

/// Count the components of the doubled curve system combinatorially.
///
/// Each tangle induces a fixed pairing of the rails on its ports (the
/// ribbon-boundary pairing at vertices, strand-following at crossings,
/// around-the-bend at folds); wires connect Up to Up and Down to Down.
pub fn trace_doubled_components(v: &Validated) -> usize {
    // Node = (column, tangle, side, port, rail).
    type Node = (usize, usize, u8, usize, Rail);
    let mut adj: BTreeMap<Node, Vec<Node>> = BTreeMap::new();
    let mut link = |a: Node, b: Node, adj: &mut BTreeMap<Node, Vec<Node>>| {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    };

    for (ci, col) in v.product.columns.iter().enumerate() {
        for (ti, t) in col.iter().enumerate() {
            let n = |side: u8, port: usize, rail: Rail| (ci, ti, side, port, rail);
            match t {
                LeftEndpoint(_) => {
                    link(n(1, 0, Rail::Up), n(1, 0, Rail::Down), &mut adj);
                }
                RightEndpoint(_) => {
                    link(n(0, 0, Rail::Up), n(0, 0, Rail::Down), &mut adj);
                }
                LeftFold => {
                    link(n(1, 0, Rail::Up), n(1, 1, Rail::Down), &mut adj);
                    link(n(1, 0, Rail::Down), n(1, 1, Rail::Up), &mut adj);
                }
                RightFold => {
                    link(n(0, 0, Rail::Up), n(0, 1, Rail::Down), &mut adj);
                    link(n(0, 0, Rail::Down), n(0, 1, Rail::Up), &mut adj);
                }
                BranchPlus(b) => {
                    let r = *b as usize - 1;
                    link(n(0, 0, Rail::Up), n(1, 0, Rail::Up), &mut adj);
                    for i in 0..r - 1 {
                        link(n(1, i, Rail::Down), n(1, i + 1, Rail::Up), &mut adj);
                    }
                    link(n(1, r - 1, Rail::Down), n(0, 0, Rail::Down), &mut adj);
                }
                BranchMinus(b) => {
                    let l = *b as usize - 1;
                    link(n(1, 0, Rail::Up), n(0, 0, Rail::Up), &mut adj);
                    for i in 0..l - 1 {
                        link(n(0, i, Rail::Down), n(0, i + 1, Rail::Up), &mut adj);
                    }
                    link(n(0, l - 1, Rail::Down), n(1, 0, Rail::Down), &mut adj);
                }
                DoublePoint => {
                    for rail in [Rail::Up, Rail::Down] {
                        link(n(0, 0, rail), n(1, 1, rail), &mut adj);
                        link(n(0, 1, rail), n(1, 0, rail), &mut adj);
                    }
                }
                IdentityStrand => {
                    for rail in [Rail::Up, Rail::Down] {
                        link(n(0, 0, rail), n(1, 0, rail), &mut adj);
                    }
                }
            }
        }
    }

    // Wires across gaps keep the rail side.
    for wires in &v.routing {
        for w in wires {
            for rail in [Rail::Up, Rail::Down] {
                let a = (w.from.tangle.0, w.from.tangle.1, 1u8, w.from.port, rail);
                let b = (w.to.tangle.0, w.to.tangle.1, 0u8, w.to.port, rail);
                link(a, b, &mut adj);
            }
        }
    }

    // Every node has degree exactly 2; count cycles.
    let mut seen: std::collections::BTreeSet<Node> = Default::default();
    let mut cycles = 0;
    for (&start, _) in adj.iter() {
        if seen.contains(&start) {
            continue;
        }
        cycles += 1;
        let mut prev = start;
        let mut cur = start;
        loop {
            seen.insert(cur);
            let nbrs = &adj[&cur];
            debug_assert_eq!(nbrs.len(), 2, "rail node degree must be 2");
            let next = if nbrs[0] == prev && !(nbrs[0] == nbrs[1]) {
                nbrs[1]
            } else if nbrs[1] == prev {
                nbrs[0]
            } else {
                nbrs[0]
            };
            if next == start {
                break;
            }
            prev = cur;
            cur = next;
        }
    }
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn product(cols: Vec<Vec<TangleKind>>) -> TangleProduct {
        TangleProduct { columns: cols }
    }

    fn interval() -> TangleProduct {
        product(vec![
            vec![LeftEndpoint(Sign::Plus)],
            vec![RightEndpoint(Sign::Plus)],
        ])
    }

    fn one_x_interval() -> TangleProduct {
        product(vec![
            vec![LeftFold],
            vec![DoublePoint],
            vec![RightEndpoint(Sign::Plus), RightEndpoint(Sign::Plus)],
        ])
    }

    fn lollipop() -> TangleProduct {
        product(vec![
            vec![LeftFold],
            vec![BranchMinus(3)],
            vec![RightEndpoint(Sign::Plus)],
        ])
    }

    fn star() -> TangleProduct {
        product(vec![
            vec![LeftEndpoint(Sign::Plus)],
            vec![BranchPlus(3)],
            vec![RightEndpoint(Sign::Plus), RightEndpoint(Sign::Plus)],
        ])
    }

    #[test]
    fn validate_minimal_interval() {
        let v = validate_product(&interval()).unwrap();
        assert_eq!(v.routing.len(), 1);
        assert_eq!(v.routing[0].len(), 1);
    }

    #[test]
    fn validate_one_x_interval_arity_chain() {
        // 0 -> 2 -> 2 -> 0 strands.
        let v = validate_product(&one_x_interval()).unwrap();
        assert_eq!(v.routing[0].len(), 2);
        assert_eq!(v.routing[1].len(), 2);
    }

    #[test]
    fn validate_rejects_arity_mismatch() {
        let bad = product(vec![vec![LeftEndpoint(Sign::Plus)], vec![DoublePoint]]);
        match validate_product(&bad) {
            Err(ValidateError::ArityMismatch {
                column,
                expected,
                found,
            }) => {
                assert_eq!(column, 1);
                assert_eq!(expected, 1);
                assert_eq!(found, 2);
            }
            other => panic!("expected arity mismatch, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_bad_valence_and_open_boundary() {
        let bad = product(vec![vec![LeftFold], vec![BranchMinus(2)], vec![
            RightEndpoint(Sign::Plus),
        ]]);
        assert!(matches!(
            validate_product(&bad),
            Err(ValidateError::BadValence { valence: 2, .. })
        ));
        let open = product(vec![vec![LeftEndpoint(Sign::Plus)]]);
        assert!(matches!(
            validate_product(&open),
            Err(ValidateError::OpenBoundary { .. })
        ));
        let ident_only = product(vec![vec![IdentityStrand]]);
        assert!(matches!(
            validate_product(&ident_only),
            Err(ValidateError::EmptyProduct)
        ));
    }

    #[test]
    fn counts_and_formulas_on_the_named_examples() {
        let v = validate_product(&interval()).unwrap();
        let c = count_features(&v);
        assert_eq!((c.e1, c.e2, c.f1, c.f2, c.delta), (1, 1, 0, 0, 0));
        assert_eq!(euler_from_counts(&c), 1);
        assert_eq!(tb_from_counts(&c), -1);

        let v = validate_product(&one_x_interval()).unwrap();
        let c = count_features(&v);
        assert_eq!((c.e2, c.f1, c.delta), (2, 1, 1));
        assert_eq!(euler_from_counts(&c), 1);
        assert_eq!(tb_from_counts(&c), 1);

        let v = validate_product(&star()).unwrap();
        let c = count_features(&v);
        assert_eq!(c.plus_branch_valences, vec![3]);
        assert_eq!(euler_from_counts(&c), 1);
        assert_eq!(tb_from_counts(&c), -1);

        let v = validate_product(&lollipop()).unwrap();
        let c = count_features(&v);
        assert_eq!(euler_from_counts(&c), 0);
        assert_eq!(tb_from_counts(&c), 0);
    }

    #[test]
    fn graph_assembly_matches_lemma_style_euler() {
        for (p, chi, verts, circles) in [
            (interval(), 1i64, 2usize, 0usize),
            (one_x_interval(), 1, 2, 0),
            (star(), 1, 4, 0),
            (lollipop(), 0, 2, 0),
            (
                product(vec![vec![LeftFold], vec![RightFold]]),
                0,
                0,
                1,
            ),
        ] {
            let v = validate_product(&p).unwrap();
            let g = assemble_graph(&v);
            assert_eq!(g.euler_direct, chi, "chi of {p:?}");
            assert_eq!(g.vertices.len(), verts);
            let fc = g
                .edges
                .iter()
                .filter(|e| matches!(e, GraphEdge::FreeCircle))
                .count();
            assert_eq!(fc, circles);
            let c = count_features(&v);
            assert_eq!(euler_from_counts(&c), g.euler_direct, "lemma cross-check");
        }
    }

    #[test]
    fn lollipop_is_loop_plus_pendant() {
        let v = validate_product(&lollipop()).unwrap();
        let g = assemble_graph(&v);
        let loops = g
            .edges
            .iter()
            .filter(|e| matches!(e, GraphEdge::Between(a, b) if a == b))
            .count();
        assert_eq!(loops, 1);
        assert_eq!(g.edges.len(), 2);
    }

    #[test]
    fn doubled_component_counts() {
        assert_eq!(
            trace_doubled_components(&validate_product(&interval()).unwrap()),
            1
        );
        let circle = product(vec![vec![LeftFold], vec![RightFold]]);
        assert_eq!(
            trace_doubled_components(&validate_product(&circle).unwrap()),
            2
        );
        assert_eq!(
            trace_doubled_components(&validate_product(&lollipop()).unwrap()),
            2
        );
        assert_eq!(
            trace_doubled_components(&validate_product(&one_x_interval()).unwrap()),
            1
        );
        assert_eq!(
            trace_doubled_components(&validate_product(&star()).unwrap()),
            1
        );
    }

    #[test]
    fn mu_invariant_under_identity_column_insertion() {
        let p = one_x_interval();
        let v = validate_product(&p).unwrap();
        let mu = trace_doubled_components(&v);
        let mut cols = p.columns.clone();
        cols.insert(1, vec![IdentityStrand, IdentityStrand]);
        let v2 = validate_product(&product(cols)).unwrap();
        assert_eq!(trace_doubled_components(&v2), mu);
    }

    #[test]
    fn slice_invariants_examples() {
        let v = validate_product(&interval()).unwrap();
        let g = assemble_graph(&v);
        let c = count_features(&v);
        let (chi_s, g_s) = slice_invariants(&g, &c, 1).unwrap();
        assert_eq!(chi_s, 1);
        assert_eq!(g_s, num::rational::Ratio::new(0, 1));

        let v = validate_product(&one_x_interval()).unwrap();
        let g = assemble_graph(&v);
        let c = count_features(&v);
        let (chi_s, g_s) = slice_invariants(&g, &c, 1).unwrap();
        assert_eq!(chi_s, -1);
        assert_eq!(g_s, num::rational::Ratio::new(1, 1));

        let v = validate_product(&lollipop()).unwrap();
        let g = assemble_graph(&v);
        let c = count_features(&v);
        let (chi_s, g_s) = slice_invariants(&g, &c, 2).unwrap();
        assert_eq!(chi_s, 0);
        assert_eq!(g_s, num::rational::Ratio::new(0, 1));
    }

    #[test]
    fn endpoint_sign_flips_change_nothing_structural() {
        let p = one_x_interval();
        let v = validate_product(&p).unwrap();
        let mut flipped = p.clone();
        for col in &mut flipped.columns {
            for t in col {
                if let RightEndpoint(s) = t {
                    *t = RightEndpoint(s.flip());
                }
            }
        }
        let vf = validate_product(&flipped).unwrap();
        assert_eq!(
            tb_from_counts(&count_features(&v)),
            tb_from_counts(&count_features(&vf))
        );
        assert_eq!(
            assemble_graph(&v).euler_direct,
            assemble_graph(&vf).euler_direct
        );
        assert_eq!(trace_doubled_components(&v), trace_doubled_components(&vf));
    }
}
