//! Per-tangle geometry of the doubled curves.
//!
//! Inside its cell each tangle is replaced by a fixed family of rail
//! paths: the two parallel curves of the doubling enter and leave the
//! cell at port heights +-w around each strand, the upper rail flowing
//! east and the lower rail flowing west (the divide stays on the
//! traveler's right, which realizes the "keeping left" orientation).
//!
//! Shapes are data: polylines in box-fraction coordinates. What matters
//! and is pinned by tests:
//!   - connectivity matches the combinatorial rail pairing,
//!   - which corners pass through the straight-down tangent direction
//!     (winding events), and with which sweep sense,
//!   - the designed self-crossings (the four at a double point, one in
//!     each plus endpoint cell) and nothing else.
//!
//! Sign asymmetry: minus endpoints connect their rails with a plain bend
//! (a left endpoint then has neither crossings nor winding events, a
//! right endpoint has one downward-sweep corner), plus endpoints take
//! the other route around, trading a winding event for a crossing.
//! Plus branches dip through straight-down once per wedge between their
//! fan strands; minus branches round the same wedges upward.
//!
//! Corners that sweep through straight down get slightly asymmetric legs
//! and a per-tangle `salt` shift, so no two cut corners in a drawing
//! share an x coordinate (their rerouted strands drop vertically).

use crate::geom::{Pt, Q};
use crate::tangle::{Rail, Sign, TangleKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PortRail {
    /// 0 = left cell face, 1 = right cell face.
    pub side: u8,
    pub port: usize,
    pub rail: Rail,
}

/// One rail path through a cell, from the face point where the curve
/// enters to the face point where it leaves (both included in `pts`).
#[derive(Clone, Debug)]
pub struct RailPath {
    pub entry: PortRail,
    pub exit: PortRail,
    pub pts: Vec<Pt>,
}

struct Frame {
    x0: Q,
    x1: Q,
    w: Q,
    salt: Q,
}

impl Frame {
    fn x(&self, num: i128, den: i128) -> Q {
        self.x0 + (self.x1 - self.x0) * Q::new(num, den)
    }

    /// x position of a cut corner: salted so it is unique per tangle.
    fn cut_x(&self, num: i128, den: i128) -> Q {
        self.x0 + (self.x1 - self.x0) * (Q::new(num, den) + self.salt)
    }
}

fn pr(side: u8, port: usize, rail: Rail) -> PortRail {
    PortRail { side, port, rail }
}

/// Rail paths for one tangle.
///
/// `left_ys[m]` / `right_ys[m]` are the strand heights of the ports on
/// each face; `w` is the rail half-width (1/4 of the unit row spacing);
/// `salt` disambiguates cut-corner positions between stacked tangles.
pub fn template_paths(
    kind: &TangleKind,
    box_x0: Q,
    box_x1: Q,
    left_ys: &[Q],
    right_ys: &[Q],
    w: Q,
    salt: usize,
) -> Vec<RailPath> {
    let f = Frame {
        x0: box_x0,
        x1: box_x1,
        w,
        salt: Q::new(salt as i128, 800),
    };
    let up = |y: Q| y + w;
    let dn = |y: Q| y - w;
    // Cut corners sit 1/32 above the midline between the two heights the
    // dip connects, making the two legs' slopes differ.
    let tweak = Q::new(1, 32);

    match kind {
        TangleKind::IdentityStrand => {
            let y = left_ys[0];
            debug_assert_eq!(y, right_ys[0]);
            vec![
                RailPath {
                    entry: pr(0, 0, Rail::Up),
                    exit: pr(1, 0, Rail::Up),
                    pts: vec![Pt::new(f.x0, up(y)), Pt::new(f.x1, up(y))],
                },
                RailPath {
                    entry: pr(1, 0, Rail::Down),
                    exit: pr(0, 0, Rail::Down),
                    pts: vec![Pt::new(f.x1, dn(y)), Pt::new(f.x0, dn(y))],
                },
            ]
        }

        TangleKind::DoublePoint => {
            let ya = left_ys[0];
            let yb = left_ys[1];
            debug_assert_eq!(ya, right_ys[0]);
            debug_assert_eq!(yb, right_ys[1]);
            // Strand 1 runs top-left to bottom-right, strand 2 the other way.
            vec![
                RailPath {
                    entry: pr(0, 0, Rail::Up),
                    exit: pr(1, 1, Rail::Up),
                    pts: vec![Pt::new(f.x0, up(ya)), Pt::new(f.x1, up(yb))],
                },
                RailPath {
                    entry: pr(1, 1, Rail::Down),
                    exit: pr(0, 0, Rail::Down),
                    pts: vec![Pt::new(f.x1, dn(yb)), Pt::new(f.x0, dn(ya))],
                },
                RailPath {
                    entry: pr(0, 1, Rail::Up),
                    exit: pr(1, 0, Rail::Up),
                    pts: vec![Pt::new(f.x0, up(yb)), Pt::new(f.x1, up(ya))],
                },
                RailPath {
                    entry: pr(1, 0, Rail::Down),
                    exit: pr(0, 1, Rail::Down),
                    pts: vec![Pt::new(f.x1, dn(ya)), Pt::new(f.x0, dn(yb))],
                },
            ]
        }

        TangleKind::LeftEndpoint(sign) => {
            let y = right_ys[0];
            let pts = match sign {
                // Plain bend around the endpoint, tangent sweeps W-NW-NE-E
                // through straight up: no winding event, no crossing.
                Sign::Minus => vec![
                    Pt::new(f.x1, dn(y)),
                    Pt::new(f.x(55, 100), dn(y)),
                    Pt::new(f.x(15, 100), y),
                    Pt::new(f.x(55, 100), up(y)),
                    Pt::new(f.x1, up(y)),
                ],
                // Dip below the endpoint through straight down (one winding
                // event), then rise across the incoming rail (one crossing).
                // The excursion stays within 5/8 of the strand row so it
                // cannot reach the next band's rails.
                Sign::Plus => vec![
                    Pt::new(f.x1, dn(y)),
                    Pt::new(f.x(45, 100), dn(y)),
                    Pt::new(f.cut_x(30, 100), y - Q::new(1, 2) + tweak),
                    Pt::new(f.x(55, 100), y - Q::new(5, 8)),
                    Pt::new(f.x(95, 100), up(y)),
                    Pt::new(f.x1, up(y)),
                ],
            };
            vec![RailPath {
                entry: pr(1, 0, Rail::Down),
                exit: pr(1, 0, Rail::Up),
                pts,
            }]
        }

        TangleKind::RightEndpoint(sign) => {
            let y = left_ys[0];
            let pts = match sign {
                // Bump over the top (through straight up), then descend
                // across the incoming rail: one crossing, no winding event.
                // Stays within 5/8 of the strand row.
                Sign::Plus => vec![
                    Pt::new(f.x0, up(y)),
                    Pt::new(f.x(55, 100), up(y)),
                    Pt::new(f.x(70, 100), y + Q::new(1, 2)),
                    Pt::new(f.x(45, 100), y + Q::new(5, 8)),
                    Pt::new(f.x(5, 100), dn(y)),
                    Pt::new(f.x0, dn(y)),
                ],
                // Plain bend around the endpoint through straight down:
                // one winding event, no crossing.
                Sign::Minus => vec![
                    Pt::new(f.x0, up(y)),
                    Pt::new(f.x(55, 100), up(y)),
                    Pt::new(f.cut_x(85, 100), y + tweak),
                    Pt::new(f.x(55, 100), dn(y)),
                    Pt::new(f.x0, dn(y)),
                ],
            };
            vec![RailPath {
                entry: pr(0, 0, Rail::Up),
                exit: pr(0, 0, Rail::Down),
                pts,
            }]
        }

        TangleKind::LeftFold => {
            let y1 = right_ys[0];
            let y2 = right_ys[1];
            let mid = (y1 + y2) * Q::new(1, 2);
            vec![
                // Outer bend around the west extreme, through straight up.
                RailPath {
                    entry: pr(1, 1, Rail::Down),
                    exit: pr(1, 0, Rail::Up),
                    pts: vec![
                        Pt::new(f.x1, dn(y2)),
                        Pt::new(f.x(55, 100), dn(y2)),
                        Pt::new(f.x(8, 100), mid),
                        Pt::new(f.x(55, 100), up(y1)),
                        Pt::new(f.x1, up(y1)),
                    ],
                },
                // Inner bend dips between the strands through straight down.
                RailPath {
                    entry: pr(1, 0, Rail::Down),
                    exit: pr(1, 1, Rail::Up),
                    pts: vec![
                        Pt::new(f.x1, dn(y1)),
                        Pt::new(f.x(80, 100), dn(y1)),
                        Pt::new(f.cut_x(72, 100), mid + tweak),
                        Pt::new(f.x(80, 100), up(y2)),
                        Pt::new(f.x1, up(y2)),
                    ],
                },
            ]
        }

        TangleKind::RightFold => {
            let y1 = left_ys[0];
            let y2 = left_ys[1];
            let mid = (y1 + y2) * Q::new(1, 2);
            vec![
                // Outer bend around the east extreme, through straight down.
                RailPath {
                    entry: pr(0, 0, Rail::Up),
                    exit: pr(0, 1, Rail::Down),
                    pts: vec![
                        Pt::new(f.x0, up(y1)),
                        Pt::new(f.x(45, 100), up(y1)),
                        Pt::new(f.cut_x(92, 100), mid + tweak),
                        Pt::new(f.x(45, 100), dn(y2)),
                        Pt::new(f.x0, dn(y2)),
                    ],
                },
                // Inner bend through straight up.
                RailPath {
                    entry: pr(0, 1, Rail::Up),
                    exit: pr(0, 0, Rail::Down),
                    pts: vec![
                        Pt::new(f.x0, up(y2)),
                        Pt::new(f.x(20, 100), up(y2)),
                        Pt::new(f.x(28, 100), mid),
                        Pt::new(f.x(20, 100), dn(y1)),
                        Pt::new(f.x0, dn(y1)),
                    ],
                },
            ]
        }

        TangleKind::BranchPlus(b) => {
            let r = *b as usize - 1;
            let yl = left_ys[0];
            debug_assert_eq!(yl, right_ys[0]);
            let mut paths = Vec::new();
            // Top rail straight across, above the whole fan.
            paths.push(RailPath {
                entry: pr(0, 0, Rail::Up),
                exit: pr(1, 0, Rail::Up),
                pts: vec![Pt::new(f.x0, up(yl)), Pt::new(f.x1, up(yl))],
            });
            // One dip per wedge between consecutive fan strands; each has a
            // single corner sweeping through straight down (winding event).
            for i in 0..r - 1 {
                let yi = right_ys[i];
                let yj = right_ys[i + 1];
                paths.push(RailPath {
                    entry: pr(1, i, Rail::Down),
                    exit: pr(1, i + 1, Rail::Up),
                    pts: vec![
                        Pt::new(f.x1, dn(yi)),
                        Pt::new(f.x(55, 100), dn(yi)),
                        Pt::new(
                            f.cut_x(45, 100) + (f.x1 - f.x0) * Q::new(i as i128, 256),
                            (yi + yj) * Q::new(1, 2) + tweak,
                        ),
                        Pt::new(f.x(56, 100), up(yj)),
                        Pt::new(f.x1, up(yj)),
                    ],
                });
            }
            // Bottom rail: west below the lowest fan strand, then diagonally
            // up past the vertex, out at the left port's lower rail.
            let yb = right_ys[r - 1];
            paths.push(RailPath {
                entry: pr(1, r - 1, Rail::Down),
                exit: pr(0, 0, Rail::Down),
                pts: vec![
                    Pt::new(f.x1, dn(yb)),
                    Pt::new(f.x(30, 100), dn(yb)),
                    Pt::new(f.x(12, 100), dn(yl)),
                    Pt::new(f.x0, dn(yl)),
                ],
            });
            paths
        }

        TangleKind::BranchMinus(b) => {
            let l = *b as usize - 1;
            let yr = right_ys[0];
            debug_assert_eq!(yr, left_ys[0]);
            let mut paths = Vec::new();
            paths.push(RailPath {
                entry: pr(0, 0, Rail::Up),
                exit: pr(1, 0, Rail::Up),
                pts: vec![Pt::new(f.x0, up(yr)), Pt::new(f.x1, up(yr))],
            });
            // Wedge bends round upward: no winding events at a minus branch.
            for i in 0..l - 1 {
                let yi = left_ys[i];
                let yj = left_ys[i + 1];
                paths.push(RailPath {
                    entry: pr(0, i + 1, Rail::Up),
                    exit: pr(0, i, Rail::Down),
                    pts: vec![
                        Pt::new(f.x0, up(yj)),
                        Pt::new(f.x(45, 100), up(yj)),
                        Pt::new(
                            f.x(52, 100) + (f.x1 - f.x0) * Q::new(i as i128, 256),
                            (yi + yj) * Q::new(1, 2),
                        ),
                        Pt::new(f.x(45, 100), dn(yi)),
                        Pt::new(f.x0, dn(yi)),
                    ],
                });
            }
            let yb = left_ys[l - 1];
            paths.push(RailPath {
                entry: pr(1, 0, Rail::Down),
                exit: pr(0, l - 1, Rail::Down),
                pts: vec![
                    Pt::new(f.x1, dn(yr)),
                    Pt::new(f.x(88, 100), dn(yr)),
                    Pt::new(f.x(70, 100), dn(yb)),
                    Pt::new(f.x0, dn(yb)),
                ],
            });
            paths
        }
    }
}

/// Designed self-crossing count per tangle cell in the doubled picture
/// (before the push-off copy is added); double points contribute four,
/// plus endpoints one.
pub fn template_self_crossings(kind: &TangleKind) -> usize {
    match kind {
        TangleKind::DoublePoint => 4,
        TangleKind::LeftEndpoint(Sign::Plus) | TangleKind::RightEndpoint(Sign::Plus) => 1,
        _ => 0,
    }
}

/// Winding events (corners sweeping through straight down) per cell:
/// (increasing-argument count, decreasing-argument count).
pub fn template_winding_events(kind: &TangleKind) -> (usize, usize) {
    match kind {
        TangleKind::LeftEndpoint(Sign::Plus) => (1, 0),
        TangleKind::RightEndpoint(Sign::Minus) => (0, 1),
        TangleKind::LeftFold => (1, 0),
        TangleKind::RightFold => (0, 1),
        TangleKind::BranchPlus(b) => (*b as usize - 2, 0),
        _ => (0, 0),
    }
}
