//! Partitions, skew and shifted Young diagrams, their box posets, outward corners,
//! and the rook statistics used to certify toggle-symmetric expectations.
//!
//! Boxes use matrix coordinates `[i, j]` (row `i`, column `j`, both from 1). Lattice
//! points `(x, y)` are box corners, `(0, 0)` at the northwest; box `[i, j]` has
//! southeast corner `(i, j)`.

use std::fmt;
use std::str::FromStr;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::cde::TcdeCertificate;
use crate::error::{Error, Result};
use crate::lattice::{IdealLattice, Statistic};
use crate::linalg::solve;
use crate::poset::Poset;
use crate::rational::{qi, zero, Q};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Trailing zeros are dropped; anything else out of order is rejected.
    pub fn new(mut parts: Vec<usize>) -> Result<Partition> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidShape(format!("{parts:?} is not a partition")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Partition {
        Partition { parts: Vec::new() }
    }

    /// `b^a`.
    pub fn rectangle(a: usize, b: usize) -> Partition {
        if b == 0 {
            return Partition::empty();
        }
        Partition { parts: vec![b; a] }
    }

    /// `(d, d-1, ..., 1)`.
    pub fn staircase(d: usize) -> Partition {
        Partition {
            parts: (1..=d).rev().collect(),
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `i` counted from 1, zero past the end.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return usize::MAX;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_strict(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.length() <= self.length() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// Partwise sum.
    pub fn add(&self, other: &Partition) -> Partition {
        let len = self.length().max(other.length());
        Partition {
            parts: (1..=len).map(|i| self.part(i) + other.part(i)).collect(),
        }
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// All strict partitions of `n`.
    pub fn all_strict_of(n: usize) -> Vec<Partition> {
        Partition::all_of(n)
            .into_iter()
            .filter(Partition::is_strict)
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "{}", s.join(","))
    }
}

fn parse_parts(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad part {x:?}")))
        })
        .collect()
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Partition> {
        Partition::new(parse_parts(s)?)
    }
}

/// Which border an outward corner sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CornerKind {
    /// An east step followed by a north step on the northwest border.
    Northwest,
    /// A north step followed by an east step on the southeast border.
    Southeast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Corner {
    pub kind: CornerKind,
    pub at: (usize, usize),
}

/// `lambda / nu`, translated so that its first and last rows are nonempty and
/// its westmost box lies in column 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewShape {
    outer: Vec<usize>,
    inner: Vec<usize>,
    boxes: Vec<(usize, usize)>,
}

impl SkewShape {
    pub fn new(outer: &Partition, inner: &Partition) -> Result<SkewShape> {
        if !outer.contains(inner) {
            return Err(Error::InvalidShape(format!(
                "({inner}) is not inside ({outer})"
            )));
        }
        let rows = outer.length();
        let mut lo: Vec<usize> = (1..=rows).map(|i| inner.part(i)).collect();
        let mut hi: Vec<usize> = outer.parts.clone();
        let nonempty: Vec<usize> = (0..rows).filter(|&r| hi[r] > lo[r]).collect();
        let (Some(&first), Some(&last)) = (nonempty.first(), nonempty.last()) else {
            return Ok(SkewShape {
                outer: Vec::new(),
                inner: Vec::new(),
                boxes: Vec::new(),
            });
        };
        hi = hi[first..=last].to_vec();
        lo = lo[first..=last].to_vec();
        let shift = *lo.last().unwrap();
        for x in hi.iter_mut().chain(lo.iter_mut()) {
            *x -= shift;
        }
        let mut boxes = Vec::new();
        for (r, (&l, &h)) in lo.iter().zip(&hi).enumerate() {
            for c in l + 1..=h {
                boxes.push((r + 1, c));
            }
        }
        Ok(SkewShape {
            outer: hi,
            inner: lo,
            boxes,
        })
    }

    pub fn straight(lambda: &Partition) -> SkewShape {
        SkewShape::new(lambda, &Partition::empty()).expect("empty inner shape")
    }

    /// Replaces each box by an `a x b` rectangle.
    pub fn stretch(&self, a: usize, b: usize) -> SkewShape {
        let blow = |v: &[usize]| -> Vec<usize> {
            v.iter()
                .flat_map(|&x| std::iter::repeat_n(x * b, a))
                .collect()
        };
        let outer = Partition::new(blow(&self.outer)).unwrap();
        let inner = Partition::new(blow(&self.inner)).unwrap();
        SkewShape::new(&outer, &inner).unwrap()
    }

    pub fn outer(&self) -> &[usize] {
        &self.outer
    }

    pub fn inner(&self) -> &[usize] {
        &self.inner
    }

    /// Boxes in row-major order; a box's position here is its poset element id.
    pub fn boxes(&self) -> &[(usize, usize)] {
        &self.boxes
    }

    pub fn box_id(&self, i: usize, j: usize) -> Option<usize> {
        self.boxes.iter().position(|&b| b == (i, j))
    }

    /// Height `a` of the bounding rectangle.
    pub fn height(&self) -> usize {
        self.outer.len()
    }

    /// Width `b` of the bounding rectangle.
    pub fn width(&self) -> usize {
        self.outer.first().copied().unwrap_or(0)
    }

    /// `u <= v` iff `v` is weakly southeast of `u`.
    pub fn poset(&self) -> Poset {
        let mut rel = Vec::new();
        for (id, &(i, j)) in self.boxes.iter().enumerate() {
            if let Some(s) = self.box_id(i + 1, j) {
                rel.push((id, s));
            }
            if let Some(e) = self.box_id(i, j + 1) {
                rel.push((id, e));
            }
        }
        let labels = self
            .boxes
            .iter()
            .map(|&(i, j)| format!("[{i},{j}]"))
            .collect();
        Poset::new(self.boxes.len(), &rel)
            .expect("box order is acyclic")
            .with_labels(labels)
    }

    pub fn is_connected(&self) -> bool {
        self.poset().is_connected()
    }

    /// Row ends `rho_1, ..., rho_a` of the partition whose boxes are `inner` plus `ideal`.
    pub fn row_ends(&self, members: &[usize]) -> Vec<usize> {
        let mut rho = self.inner.clone();
        for &id in members {
            rho[self.boxes[id].0 - 1] += 1;
        }
        rho
    }

    /// Outward corners: east-north turns of the northwest border and north-east turns
    /// of the southeast border.
    pub fn corners(&self) -> Vec<Corner> {
        let a = self.height();
        let mut out = Vec::new();
        for (x, y) in en_turns(&self.inner) {
            debug_assert!(x <= a);
            out.push(Corner {
                kind: CornerKind::Northwest,
                at: (x, y),
            });
        }
        for (x, y) in ne_turns(&self.outer, self.width()) {
            out.push(Corner {
                kind: CornerKind::Southeast,
                at: (x, y),
            });
        }
        out
    }

    /// Whether the lattice path of the ideal uses both steps of `corner`.
    pub fn ideal_contains_corner(&self, members: &[usize], corner: &Corner) -> bool {
        let rho = self.row_ends(members);
        match corner.kind {
            CornerKind::Northwest => en_turns(&rho).contains(&corner.at),
            CornerKind::Southeast => ne_turns(&rho, self.width()).contains(&corner.at),
        }
    }

    /// Connected, with every outward corner on the line from `(a, 0)` to `(0, b)`.
    pub fn is_balanced(&self) -> Result<bool> {
        if !self.is_connected() {
            return Err(Error::InvalidShape(
                "balance is defined for connected shapes".into(),
            ));
        }
        let (a, b) = (self.height(), self.width());
        Ok(self
            .corners()
            .iter()
            .all(|c| b * c.at.0 + a * c.at.1 == a * b))
    }

    /// `C_ij`: corners strictly northwest or strictly southeast of the center of `[i, j]`.
    pub fn corners_around(&self, i: usize, j: usize) -> Vec<Corner> {
        self.corners()
            .into_iter()
            .filter(|c| {
                let (x, y) = c.at;
                (x < i && y < j) || (x >= i && y >= j)
            })
            .collect()
    }

    /// The rook `R_ij` as coefficients of `(T+_p, T-_p)` for every box `p`.
    pub fn rook_coefficients(&self, i: usize, j: usize) -> Result<Vec<(i64, i64)>> {
        if self.box_id(i, j).is_none() {
            return Err(Error::InvalidShape(format!("[{i},{j}] is not a box")));
        }
        Ok(self
            .boxes
            .iter()
            .map(|&(a, b)| {
                let mut plus = 0;
                let mut minus = 0;
                if a <= i && b <= j {
                    plus += 1;
                }
                if a >= i && b >= j {
                    minus += 1;
                }
                if a < i && b < j {
                    minus -= 1;
                }
                if a > i && b > j {
                    plus -= 1;
                }
                (plus, minus)
            })
            .collect())
    }

    pub fn rook(&self, lattice: &IdealLattice, i: usize, j: usize) -> Result<Statistic> {
        Ok(evaluate_toggle_combination(
            lattice,
            &self.rook_coefficients(i, j)?,
        ))
    }

    /// The checks a rook placement must pass: row sums `b`, column sums `a`, and when
    /// balanced, zero total on the boxes around each corner.
    pub fn placement_violations(&self, r: &[Q]) -> Vec<String> {
        let (a, b) = (self.height(), self.width());
        let mut bad = Vec::new();
        for row in 1..=a {
            let s: Q = self.sum_where(r, |(i, _)| i == row);
            if s != qi(b as i64) && self.boxes.iter().any(|&(i, _)| i == row) {
                bad.push(format!("row {row} sums to {s}"));
            }
        }
        for col in 1..=b {
            let s: Q = self.sum_where(r, |(_, j)| j == col);
            if s != qi(a as i64) && self.boxes.iter().any(|&(_, j)| j == col) {
                bad.push(format!("column {col} sums to {s}"));
            }
        }
        if self.is_balanced().unwrap_or(false) {
            for c in self.corners() {
                let s: Q = self.sum_where(r, |(i, j)| self.corners_around(i, j).contains(&c));
                if !s.is_zero() {
                    bad.push(format!("corner {:?} has total {s}", c.at));
                }
            }
        }
        bad
    }

    fn sum_where(&self, r: &[Q], keep: impl Fn((usize, usize)) -> bool) -> Q {
        self.boxes
            .iter()
            .zip(r)
            .filter(|(&b, _)| keep(b))
            .map(|(_, x)| x.clone())
            .sum()
    }

    /// Coefficients satisfying the placement conditions, found by an exact solve.
    pub fn rook_placement(&self) -> Result<Vec<Q>> {
        let (a, b) = (self.height(), self.width());
        let n = self.boxes.len();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for row in 1..=a {
            rows.push(
                self.boxes
                    .iter()
                    .map(|&(i, _)| qi((i == row) as i64))
                    .collect(),
            );
            rhs.push(qi(b as i64));
        }
        for col in 1..=b {
            rows.push(
                self.boxes
                    .iter()
                    .map(|&(_, j)| qi((j == col) as i64))
                    .collect(),
            );
            rhs.push(qi(a as i64));
        }
        if !self.is_balanced()? {
            return Err(Error::NotBalanced);
        }
        for c in self.corners() {
            rows.push(
                self.boxes
                    .iter()
                    .map(|&(i, j)| qi(self.corners_around(i, j).contains(&c) as i64))
                    .collect(),
            );
            rhs.push(zero());
        }
        let r = solve(&rows, &rhs)
            .ok_or_else(|| Error::Internal("no rook placement for a balanced shape".into()))?;
        debug_assert_eq!(r.len(), n);
        Ok(r)
    }

    /// A certificate read off from a rook placement: summing `r_ij R_ij` gives
    /// `(a + b) ddeg + sum_p A_p T_p = ab` pointwise.
    pub fn rook_certificate(&self, r: &[Q]) -> Result<TcdeCertificate> {
        let (a, b) = (self.height(), self.width());
        let mut rooks = Vec::new();
        for &(i, j) in &self.boxes {
            rooks.push(self.rook_coefficients(i, j)?);
        }
        certificate_from_rooks(&rooks, r, qi((a + b) as i64), qi((a * b) as i64))
    }

    /// Text picture of an ideal: `#` for its boxes, `.` for the rest, blanks for `inner`.
    pub fn render(&self, members: &[usize]) -> String {
        let rho = self.row_ends(members);
        let mut out = String::new();
        for ((&outer, &inner), &end) in self.outer.iter().zip(&self.inner).zip(&rho) {
            for c in 1..=outer {
                out.push(if c <= inner {
                    ' '
                } else if c <= end {
                    '#'
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
        out
    }
}

/// East-then-north turns of the path tracing row ends `rho` (rows `1..=a`).
fn en_turns(rho: &[usize]) -> Vec<(usize, usize)> {
    let a = rho.len();
    (1..=a)
        .filter(|&i| rho[i - 1] > rho.get(i).copied().unwrap_or(0))
        .map(|i| (i, rho[i - 1]))
        .collect()
}

/// North-then-east turns of the same path, which ends with an east run to column `b`.
fn ne_turns(rho: &[usize], b: usize) -> Vec<(usize, usize)> {
    let a = rho.len();
    (0..a)
        .filter(|&i| {
            let above = if i == 0 { b } else { rho[i - 1] };
            above > rho[i]
        })
        .map(|i| (i, rho[i]))
        .collect()
}

/// Evaluates `sum_p (plus_p T+_p + minus_p T-_p)` on every ideal.
pub fn evaluate_toggle_combination(lattice: &IdealLattice, coeff: &[(i64, i64)]) -> Statistic {
    Statistic::from_ints((0..lattice.len()).map(|i| {
        let up: i64 = lattice
            .upper_covers(i)
            .iter()
            .map(|&(p, _)| coeff[p].0)
            .sum();
        let down: i64 = lattice
            .lower_covers(i)
            .iter()
            .map(|&(p, _)| coeff[p].1)
            .sum();
        up + down
    }))
}

/// Turns `sum_ij r_ij R_ij = total` into `ddeg = c + sum kappa_p T_p`, provided every box
/// collects `weight` in `T+_p + T-_p`. Writing `T+ = T- + T` the sum is
/// `weight * ddeg + sum_p A_p T_p`, so `c = total / weight` and `kappa = -A / weight`.
fn certificate_from_rooks(
    rooks: &[Vec<(i64, i64)>],
    r: &[Q],
    weight: Q,
    total: Q,
) -> Result<TcdeCertificate> {
    let n = rooks.first().map_or(0, Vec::len);
    let mut plus = vec![zero(); n];
    let mut minus = vec![zero(); n];
    for (coeff, rij) in rooks.iter().zip(r) {
        for (p, &(cp, cm)) in coeff.iter().enumerate() {
            plus[p] += rij * qi(cp);
            minus[p] += rij * qi(cm);
        }
    }
    for p in 0..n {
        if &plus[p] + &minus[p] != weight {
            return Err(Error::Internal(format!(
                "element {p} is attacked {} times, not {weight}",
                &plus[p] + &minus[p]
            )));
        }
    }
    Ok(TcdeCertificate {
        c: &total / &weight,
        kappa: plus.iter().map(|x| -x / &weight).collect(),
        extra: Vec::new(),
    })
}

/// The shifted diagram of a strict partition: row `i` occupies columns `i..i+lambda_i-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedShape {
    lambda: Partition,
    boxes: Vec<(usize, usize)>,
}

impl ShiftedShape {
    pub fn new(lambda: &Partition) -> Result<ShiftedShape> {
        if !lambda.is_strict() {
            return Err(Error::InvalidShape(format!("({lambda}) is not strict")));
        }
        let mut boxes = Vec::new();
        for (r, &len) in lambda.parts.iter().enumerate() {
            let i = r + 1;
            for j in i..i + len {
                boxes.push((i, j));
            }
        }
        Ok(ShiftedShape {
            lambda: lambda.clone(),
            boxes,
        })
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn boxes(&self) -> &[(usize, usize)] {
        &self.boxes
    }

    pub fn box_id(&self, i: usize, j: usize) -> Option<usize> {
        self.boxes.iter().position(|&b| b == (i, j))
    }

    pub fn is_diagonal(&self, id: usize) -> bool {
        let (i, j) = self.boxes[id];
        i == j
    }

    pub fn diagonal_boxes(&self) -> Vec<usize> {
        (0..self.boxes.len())
            .filter(|&p| self.is_diagonal(p))
            .collect()
    }

    pub fn poset(&self) -> Poset {
        let mut rel = Vec::new();
        for (id, &(i, j)) in self.boxes.iter().enumerate() {
            if let Some(s) = self.box_id(i + 1, j) {
                rel.push((id, s));
            }
            if let Some(e) = self.box_id(i, j + 1) {
                rel.push((id, e));
            }
        }
        let labels = self
            .boxes
            .iter()
            .map(|&(i, j)| format!("[{i},{j}]"))
            .collect();
        Poset::new(self.boxes.len(), &rel)
            .expect("box order is acyclic")
            .with_labels(labels)
    }

    /// Row lengths of the strict partition formed by an ideal.
    pub fn ideal_partition(&self, members: &[usize]) -> Partition {
        let mut rows = vec![0usize; self.lambda.length()];
        for &id in members {
            rows[self.boxes[id].0 - 1] += 1;
        }
        Partition::new(rows).expect("ideals of a shifted shape are strict partitions")
    }

    /// Column where the path of `rho` crosses each lattice row: `e_i = i - 1 + rho_i`,
    /// with `e_{l+1} = l`. Index 0 is unused.
    fn path_columns(&self, rho: &Partition) -> Vec<usize> {
        let l = self.lambda.length();
        let mut e = vec![0; l + 2];
        for (i, slot) in e.iter_mut().enumerate().take(l + 1).skip(1) {
            *slot = i - 1 + rho.part(i);
        }
        e[l + 1] = l;
        e
    }

    /// Outward corners of the southeast border, all north-then-east turns.
    pub fn corners(&self) -> Vec<(usize, usize)> {
        let e = self.path_columns(&self.lambda);
        (1..self.lambda.length())
            .filter(|&i| e[i] > e[i + 1])
            .map(|i| (i, e[i + 1]))
            .collect()
    }

    pub fn ideal_contains_corner(&self, members: &[usize], corner: (usize, usize)) -> bool {
        let e = self.path_columns(&self.ideal_partition(members));
        let (i, j) = corner;
        e[i + 1] == j && e[i] > j
    }

    /// Corners strictly southeast of the center of `[i, j]`.
    pub fn corners_around(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        self.corners()
            .into_iter()
            .filter(|&(x, y)| x >= i && y >= j)
            .collect()
    }

    /// The shifted rook: like the ordinary one, but the two subtracted sums skip
    /// diagonal boxes.
    pub fn rook_coefficients(&self, i: usize, j: usize) -> Result<Vec<(i64, i64)>> {
        if self.box_id(i, j).is_none() {
            return Err(Error::InvalidShape(format!("[{i},{j}] is not a box")));
        }
        Ok(self
            .boxes
            .iter()
            .map(|&(a, b)| {
                let mut plus = 0;
                let mut minus = 0;
                if a <= i && b <= j {
                    plus += 1;
                }
                if a >= i && b >= j {
                    minus += 1;
                }
                if a < i && b < j && a < b {
                    minus -= 1;
                }
                if a > i && b > j && a < b {
                    plus -= 1;
                }
                (plus, minus)
            })
            .collect())
    }

    pub fn rook(&self, lattice: &IdealLattice, i: usize, j: usize) -> Result<Statistic> {
        Ok(evaluate_toggle_combination(
            lattice,
            &self.rook_coefficients(i, j)?,
        ))
    }

    /// Violations of the shifted placement conditions: (a) off-diagonal row and column
    /// sums 2, (b) weakly-northwest plus weakly-southeast totals 4 at diagonal boxes,
    /// (c) zero total around each corner.
    pub fn placement_violations(&self, r: &[Q]) -> Vec<String> {
        let mut bad = Vec::new();
        let sum = |keep: &dyn Fn(usize, usize) -> bool| -> Q {
            self.boxes
                .iter()
                .zip(r)
                .filter(|(&(a, b), _)| keep(a, b))
                .map(|(_, x)| x.clone())
                .sum()
        };
        for &(i, j) in &self.boxes {
            if i != j {
                let col = sum(&|_, b| b == j);
                let row = sum(&|a, _| a == i);
                if col != qi(2) || row != qi(2) {
                    bad.push(format!("(a) fails at [{i},{j}]: row {row}, column {col}"));
                }
            } else {
                let t = sum(&|a, b| a <= i && b <= i) + sum(&|a, b| a >= i && b >= i);
                if t != qi(4) {
                    bad.push(format!("(b) fails at [{i},{i}]: {t}"));
                }
            }
        }
        for c in self.corners() {
            let t = sum(&|a, b| self.corners_around(a, b).contains(&c));
            if !t.is_zero() {
                bad.push(format!("(c) fails at corner {c:?}: {t}"));
            }
        }
        bad
    }

    /// The explicit placement for Type (1) and Type (2) shapes.
    pub fn rook_placement(&self) -> Result<Vec<Q>> {
        let (n, k, type2) = match classify_shifted_balanced(&self.lambda) {
            ShiftedClass::Type1 { n, k, .. } => (n, k, false),
            ShiftedClass::Type2 { n, k, .. } => (n, k, true),
            _ => return Err(Error::Unclassified(self.lambda.parts.clone())),
        };
        let l1 = self.lambda.part(1) as i64;
        let (n_i, k_i) = (n as i64, k as i64);
        let mut r = vec![zero(); self.boxes.len()];
        let mut set = |i: usize, j: usize, v: i64| {
            let id = self.box_id(i, j).expect("placement box inside the shape");
            r[id] = qi(v);
        };
        for i in 1..=n {
            let ii = i as i64;
            if i <= k {
                set(i, i, 1 + 2 * ii - l1);
                set(i, i + 1, l1 - 1 - 2 * ii);
            } else if i < n {
                set(i, i, 3 + 2 * k_i - l1);
                set(i, i + 1, l1 - 1 - 2 * k_i);
            } else {
                set(n, n, 3 + 2 * k_i - l1);
            }
        }
        if type2 {
            for i in 1..n - k {
                set(n, n + i, 2);
            }
        }
        let _ = n_i;
        for i in 1..=k {
            set(i, self.lambda.part(1) + 1 - i, 2);
        }
        Ok(r)
    }

    /// Certificate from a placement: `sum r_ij R_ij = 4 ddeg + sum_p A_p T_p = lambda_1 + 1`.
    pub fn rook_certificate(&self, r: &[Q]) -> Result<TcdeCertificate> {
        let total: Q = r.iter().sum();
        let mut rooks = Vec::new();
        for &(i, j) in &self.boxes {
            rooks.push(self.rook_coefficients(i, j)?);
        }
        certificate_from_rooks(&rooks, r, qi(4), total)
    }

    pub fn render(&self, members: &[usize]) -> String {
        let rho = self.ideal_partition(members);
        let mut out = String::new();
        for (r, &len) in self.lambda.parts.iter().enumerate() {
            out.push_str(&" ".repeat(r));
            for c in 0..len {
                out.push(if c < rho.part(r + 1) { '#' } else { '.' });
            }
            out.push('\n');
        }
        out
    }
}

/// Strict partitions whose shifted lattice is known or conjectured to be CDE.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum ShiftedClass {
    /// `delta_n + nu`, `nu` a balanced `k x k` straight shape, `k < n`.
    Type1 {
        n: usize,
        k: usize,
        nu: Partition,
    },
    /// `delta_n + nu + (n-1-k)^n`.
    Type2 {
        n: usize,
        k: usize,
        nu: Partition,
    },
    /// `(n, n-2, ..., n-2k)`.
    Trapezoid {
        n: usize,
        k: usize,
    },
    None,
}

impl ShiftedClass {
    /// The edge density the class predicts for the shifted lattice of `lambda`.
    pub fn predicted_density(&self, lambda: &Partition) -> Option<Q> {
        match *self {
            ShiftedClass::Type1 { n, k, .. } => Some(Q::new((n + 1 + k).into(), 4.into())),
            ShiftedClass::Type2 { n, .. } => Some(Q::new(n.into(), 2.into())),
            ShiftedClass::Trapezoid { n, .. } => Some(Q::new(lambda.size().into(), (n + 1).into())),
            ShiftedClass::None => None,
        }
    }
}

fn is_balanced_square(nu: &Partition, k: usize) -> bool {
    if nu.length() != k || nu.part(1) != k {
        return false;
    }
    k == 0 || SkewShape::straight(nu).is_balanced().unwrap_or(false)
}

/// Tries every split `lambda = delta_n + mu`; since `delta_n + mu` has length `n`
/// whenever `l(mu) <= n`, only `n = l(lambda)` can match.
pub fn classify_shifted_balanced(lambda: &Partition) -> ShiftedClass {
    if !lambda.is_strict() || lambda.length() == 0 {
        return ShiftedClass::None;
    }
    for n in 1..=lambda.length() {
        if (1..=n).any(|i| lambda.part(i) < n + 1 - i) || lambda.length() > n {
            continue;
        }
        let mu: Vec<usize> = (1..=n).map(|i| lambda.part(i) - (n + 1 - i)).collect();
        let Ok(mu_p) = Partition::new(mu.clone()) else {
            continue;
        };
        let k = mu_p.part(1);
        if k < n && is_balanced_square(&mu_p, k) {
            return ShiftedClass::Type1 { n, k, nu: mu_p };
        }
        let c = mu[n - 1];
        if c >= 1 && c < n {
            let k = n - 1 - c;
            let nu = Partition::new(mu.iter().map(|&x| x - c).collect()).unwrap();
            if is_balanced_square(&nu, k) {
                return ShiftedClass::Type2 { n, k, nu };
            }
        }
    }
    let first = lambda.part(1);
    let k = lambda.length() - 1;
    if first > 2 * k && (1..=lambda.length()).all(|i| lambda.part(i) == first - 2 * (i - 1)) {
        return ShiftedClass::Trapezoid { n: first, k };
    }
    ShiftedClass::None
}

/// `skew:4,3,3,3/2,2`, `straight:3,2` or `shifted:3,2,1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeLiteral {
    Skew(SkewShape),
    Shifted(ShiftedShape),
}

impl ShapeLiteral {
    pub fn poset(&self) -> Poset {
        match self {
            ShapeLiteral::Skew(s) => s.poset(),
            ShapeLiteral::Shifted(s) => s.poset(),
        }
    }
}

impl FromStr for ShapeLiteral {
    type Err = Error;
    fn from_str(s: &str) -> Result<ShapeLiteral> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("shape literal {s:?} needs a kind prefix")))?;
        match kind {
            "straight" => Ok(ShapeLiteral::Skew(SkewShape::straight(&body.parse()?))),
            "skew" => {
                let (outer, inner) = body.split_once('/').unwrap_or((body, ""));
                Ok(ShapeLiteral::Skew(SkewShape::new(
                    &outer.parse()?,
                    &inner.parse()?,
                )?))
            }
            "shifted" => Ok(ShapeLiteral::Shifted(ShiftedShape::new(&body.parse()?)?)),
            other => Err(Error::Parse(format!("unknown shape kind {other:?}"))),
        }
    }
}
