//! Standard tableau counts (Aitken, hook lengths, Thrall) and standard barely set-valued
//! tableaux, counted both through maximal-chain expectations and by brute force.

use num::{BigInt, BigUint, One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{expectation, maxchain_dist};
use crate::error::{Error, Result};
use crate::lattice::{IdealLattice, Statistic};
use crate::linalg::determinant;
use crate::poset::Poset;
use crate::rational::{qbig, qi, zero, Q};
use crate::shapes::{classify_shifted_balanced, Partition, ShiftedClass, ShiftedShape, SkewShape};

pub const ORDINARY_BUDGET: usize = 9;
pub const SHIFTED_BUDGET: usize = 6;

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn to_integer(x: &Q) -> Result<BigUint> {
    if !x.is_integer() || x < &zero() {
        return Err(Error::Internal(format!(
            "count {x} is not a nonnegative integer"
        )));
    }
    x.to_integer()
        .to_biguint()
        .ok_or_else(|| Error::Internal(format!("count {x} out of range")))
}

/// `N! det[1 / (lambda_i - i - nu_j + j)!]`, with `1/m! = 0` for negative `m`.
pub fn f_aitken(outer: &Partition, inner: &Partition) -> Result<BigUint> {
    if !outer.contains(inner) {
        return Err(Error::InvalidShape(format!(
            "({inner}) is not inside ({outer})"
        )));
    }
    let k = outer.length();
    let m: Vec<Vec<Q>> = (1..=k)
        .map(|i| {
            (1..=k)
                .map(|j| {
                    let d = outer.part(i) as i64 - i as i64 - inner.part(j) as i64 + j as i64;
                    if d < 0 {
                        zero()
                    } else {
                        Q::new(BigInt::one(), factorial(d as usize).into())
                    }
                })
                .collect()
        })
        .collect();
    let n = outer.size() - inner.size();
    to_integer(&(qbig(BigInt::from(factorial(n))) * determinant(&m)))
}

/// Hook lengths of a straight shape, row by row.
pub fn hooks(lambda: &Partition) -> Vec<usize> {
    let conj = |j: usize| {
        (1..=lambda.length())
            .filter(|&i| lambda.part(i) >= j)
            .count()
    };
    let mut out = Vec::new();
    for i in 1..=lambda.length() {
        for j in 1..=lambda.part(i) {
            out.push(lambda.part(i) - j + conj(j) - i + 1);
        }
    }
    out
}

/// `N! / prod h(u)`.
pub fn f_hook(lambda: &Partition) -> BigUint {
    let prod = hooks(lambda)
        .into_iter()
        .fold(BigUint::one(), |acc, h| acc * h);
    factorial(lambda.size()) / prod
}

/// Shifted hook: the box, the rest of its row, the rest of its column, and all of row `j+1`.
pub fn shifted_hooks(lambda: &Partition) -> Result<Vec<usize>> {
    let shape = ShiftedShape::new(lambda)?;
    let boxes = shape.boxes();
    Ok(boxes
        .iter()
        .map(|&(i, j)| {
            1 + boxes
                .iter()
                .filter(|&&(a, b)| (a == i && b > j) || (b == j && a > i) || a == j + 1)
                .count()
        })
        .collect())
}

/// `N! / prod h*(u)`.
pub fn g_thrall(lambda: &Partition) -> Result<BigUint> {
    let prod = shifted_hooks(lambda)?
        .into_iter()
        .fold(BigUint::one(), |acc, h| acc * h);
    Ok(factorial(lambda.size()) / prod)
}

pub fn count_linear_extensions(poset: &Poset) -> Result<BigUint> {
    Ok(IdealLattice::new(poset)?.count_maximal_chains())
}

/// Which boxes may hold primed entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primes {
    None,
    OffDiagonal,
    All,
}

/// The geometry an enumerator needs: box coordinates and the box poset.
struct Board {
    boxes: Vec<(usize, usize)>,
    poset: Poset,
    shifted: bool,
}

impl Board {
    fn skew(s: &SkewShape) -> Board {
        Board {
            boxes: s.boxes().to_vec(),
            poset: s.poset(),
            shifted: false,
        }
    }

    fn shifted(s: &ShiftedShape) -> Board {
        Board {
            boxes: s.boxes().to_vec(),
            poset: s.poset(),
            shifted: true,
        }
    }

    /// Counts fillings with values `1..=N+1`, each used once, box `doubled` holding two.
    fn count_with_double(&self, doubled: usize, primes: Primes) -> u64 {
        let n = self.boxes.len();
        let mut fill: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut count = 0;
        self.place(1, (n + 1) as u32, doubled, primes, &mut fill, &mut count);
        count
    }

    fn capacity(&self, u: usize, doubled: usize) -> usize {
        1 + (u == doubled) as usize
    }

    /// Values are placed in increasing order, so a box may receive one once all boxes
    /// below it are complete.
    fn place(
        &self,
        v: u32,
        last: u32,
        doubled: usize,
        primes: Primes,
        fill: &mut Vec<Vec<u32>>,
        count: &mut u64,
    ) {
        if v > last {
            *count += self.count_primings(fill, primes);
            return;
        }
        for u in 0..self.boxes.len() {
            if fill[u].len() == self.capacity(u, doubled) {
                continue;
            }
            let ready = self
                .poset
                .lower_covers(u)
                .iter()
                .all(|&w| fill[w].len() == self.capacity(w, doubled));
            if !ready {
                continue;
            }
            fill[u].push(v);
            self.place(v + 1, last, doubled, primes, fill, count);
            fill[u].pop();
        }
    }

    /// Tries every priming of the placed values and keeps the valid tableaux. Values are
    /// encoded as `2v` for `v` and `2v + 1` for `v'`.
    fn count_primings(&self, fill: &[Vec<u32>], primes: Primes) -> u64 {
        let slots: Vec<(usize, usize)> = fill
            .iter()
            .enumerate()
            .flat_map(|(u, vals)| (0..vals.len()).map(move |k| (u, k)))
            .filter(|&(u, _)| match primes {
                Primes::None => false,
                Primes::All => true,
                Primes::OffDiagonal => self.boxes[u].0 != self.boxes[u].1,
            })
            .collect();
        let mut total = 0;
        for mask in 0u64..1 << slots.len() {
            let mut enc: Vec<Vec<u32>> = fill
                .iter()
                .map(|vals| vals.iter().map(|&v| 2 * v).collect())
                .collect();
            for (bit, &(u, k)) in slots.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    enc[u][k] += 1;
                }
            }
            if self.is_tableau(&enc) {
                total += 1;
            }
        }
        total
    }

    fn is_tableau(&self, enc: &[Vec<u32>]) -> bool {
        let max = |u: usize| *enc[u].iter().max().unwrap();
        let min = |u: usize| *enc[u].iter().min().unwrap();
        for (u, &(i, j)) in self.boxes.iter().enumerate() {
            for (v, &(a, b)) in self.boxes.iter().enumerate() {
                if u == v {
                    continue;
                }
                if self.shifted {
                    if a >= i && b >= j && max(u) > min(v) {
                        return false;
                    }
                } else if (a == i && b > j && max(u) > min(v))
                    || (b == j && a > i && max(u) >= min(v))
                {
                    return false;
                }
            }
        }
        if self.shifted {
            let mut seen_col = std::collections::HashSet::new();
            let mut seen_row = std::collections::HashSet::new();
            for (u, &(i, j)) in self.boxes.iter().enumerate() {
                for &e in &enc[u] {
                    let fresh = if e % 2 == 0 {
                        seen_col.insert((j, e))
                    } else {
                        seen_row.insert((i, e))
                    };
                    if !fresh {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn count_barely(&self, primes: Primes) -> BigUint {
        (0..self.boxes.len())
            .into_par_iter()
            .map(|d| self.count_with_double(d, primes))
            .sum::<u64>()
            .into()
    }
}

/// Brute-force count of standard barely set-valued tableaux of a skew shape.
pub fn enumerate_barely(s: &SkewShape, budget: usize) -> Result<BigUint> {
    if s.boxes().len() > budget {
        return Err(Error::BudgetExceeded(budget));
    }
    Ok(Board::skew(s).count_barely(Primes::None))
}

/// Brute-force count of standard shifted barely set-valued tableaux.
pub fn enumerate_shifted_barely(
    lambda: &Partition,
    diagonally_unprimed: bool,
    budget: usize,
) -> Result<BigUint> {
    if lambda.size() > budget {
        return Err(Error::BudgetExceeded(budget));
    }
    let primes = if diagonally_unprimed {
        Primes::OffDiagonal
    } else {
        Primes::All
    };
    Ok(Board::shifted(&ShiftedShape::new(lambda)?).count_barely(primes))
}

/// All standard barely set-valued tableaux of a small skew shape, each as per-box entries.
pub fn list_barely(s: &SkewShape, max_boxes: usize) -> Result<Vec<Vec<Vec<u32>>>> {
    if s.boxes().len() > max_boxes {
        return Err(Error::BudgetExceeded(max_boxes));
    }
    let board = Board::skew(s);
    let n = s.boxes().len();
    let mut out = Vec::new();
    for d in 0..n {
        let mut fill = vec![Vec::new(); n];
        collect(&board, 1, (n + 1) as u32, d, &mut fill, &mut out);
    }
    out.sort();
    Ok(out)
}

fn collect(
    board: &Board,
    v: u32,
    last: u32,
    doubled: usize,
    fill: &mut Vec<Vec<u32>>,
    out: &mut Vec<Vec<Vec<u32>>>,
) {
    if v > last {
        out.push(fill.clone());
        return;
    }
    for u in 0..fill.len() {
        let cap = board.capacity(u, doubled);
        let ready = board
            .poset
            .lower_covers(u)
            .iter()
            .all(|&w| fill[w].len() == board.capacity(w, doubled));
        if fill[u].len() < cap && ready {
            fill[u].push(v);
            collect(board, v + 1, last, doubled, fill, out);
            fill[u].pop();
        }
    }
}

fn maxchain_expectation(lattice: &IdealLattice, stat: &Statistic) -> Result<Q> {
    expectation(&maxchain_dist(lattice.as_poset())?, stat)
}

/// `(N + 1) f E(maxchain; ddeg)` on the lattice of the shape.
pub fn count_barely_formula(s: &SkewShape) -> Result<BigUint> {
    let lattice = IdealLattice::new(&s.poset())?;
    let n = s.boxes().len();
    let f = lattice.count_maximal_chains();
    let e = maxchain_expectation(&lattice, &lattice.ddeg_statistic())?;
    to_integer(&(qi(n as i64 + 1) * qbig(BigInt::from(f)) * e))
}

/// `sum_i T-_{[i,i]}` on the lattice of a shifted shape.
pub fn diagonal_removability(shape: &ShiftedShape, lattice: &IdealLattice) -> Statistic {
    let mut total = Statistic::constant(lattice.len(), zero());
    for p in shape.diagonal_boxes() {
        total = total.add(&lattice.toggleability(p).1);
    }
    total
}

/// `(N + 1) 2^(N+1) g E(ddeg)`, or with `diagonally_unprimed`,
/// `(N + 1) 2^(N - l) g E(2 ddeg - sum_i T-_{[i,i]})`.
pub fn count_shifted_barely_formula(
    lambda: &Partition,
    diagonally_unprimed: bool,
) -> Result<BigUint> {
    let shape = ShiftedShape::new(lambda)?;
    let lattice = IdealLattice::new(&shape.poset())?;
    let n = lambda.size();
    let g = qbig(BigInt::from(lattice.count_maximal_chains()));
    let ddeg = lattice.ddeg_statistic();
    let count = if diagonally_unprimed {
        let stat = ddeg
            .scale(&qi(2))
            .sub(&diagonal_removability(&shape, &lattice));
        let e = maxchain_expectation(&lattice, &stat)?;
        qi(n as i64 + 1) * qbig(BigInt::from(2).pow((n - lambda.length()) as u32)) * g * e
    } else {
        let e = maxchain_expectation(&lattice, &ddeg)?;
        qi(n as i64 + 1) * qbig(BigInt::from(2).pow((n + 1) as u32)) * g * e
    };
    to_integer(&count)
}

/// `ab/(a+b) (N + 1) f` for a balanced shape.
pub fn balanced_product_formula(s: &SkewShape) -> Result<BigUint> {
    if !s.is_balanced()? {
        return Err(Error::NotBalanced);
    }
    let (a, b) = (s.height() as i64, s.width() as i64);
    let f = f_aitken(
        &Partition::new(s.outer().to_vec())?,
        &Partition::new(s.inner().to_vec())?,
    )?;
    let n = s.boxes().len() as i64;
    to_integer(&(Q::new((a * b).into(), (a + b).into()) * qi(n + 1) * qbig(BigInt::from(f))))
}

/// `(lambda_1 + 1)(N + 1) 2^(N-1) g`, or for Type (1) with `diagonally_unprimed`,
/// `lambda_1 (N + 1) 2^(N - l - 1) g`.
pub fn shifted_product_formula(lambda: &Partition, diagonally_unprimed: bool) -> Result<BigUint> {
    let class = classify_shifted_balanced(lambda);
    let ok = match class {
        ShiftedClass::Type1 { .. } => true,
        ShiftedClass::Type2 { .. } => !diagonally_unprimed,
        _ => false,
    };
    if !ok {
        return Err(Error::Unclassified(lambda.parts().to_vec()));
    }
    let n = lambda.size();
    let l1 = lambda.part(1);
    let g = g_thrall(lambda)?;
    let two = BigUint::from(2u32);
    Ok(if diagonally_unprimed {
        BigUint::from(l1 * (n + 1)) * two.pow((n - lambda.length() - 1) as u32) * g
    } else {
        BigUint::from((l1 + 1) * (n + 1)) * two.pow((n - 1) as u32) * g
    })
}

/// Skew shapes with exactly `n` boxes, one per box poset up to translating pieces:
/// no empty rows, and each row starts at most one column past the end of the next row.
pub fn skew_shapes_of_size(n: usize) -> Vec<SkewShape> {
    let mut out = Vec::new();
    for rows in 1..=n {
        let mut lo = vec![0; rows];
        let mut hi = vec![0; rows];
        build_rows(rows, 0, n, &mut lo, &mut hi, &mut out);
    }
    out
}

/// Fills rows bottom-up so the next row's bounds are known.
fn build_rows(
    rows: usize,
    done: usize,
    left: usize,
    lo: &mut Vec<usize>,
    hi: &mut Vec<usize>,
    out: &mut Vec<SkewShape>,
) {
    if done == rows {
        if left == 0 {
            let outer = Partition::new(hi.clone()).unwrap();
            let inner = Partition::new(lo.clone()).unwrap();
            out.push(SkewShape::new(&outer, &inner).unwrap());
        }
        return;
    }
    let r = rows - 1 - done;
    let remaining_rows = rows - done - 1;
    if left < remaining_rows + 1 {
        return;
    }
    // row r sits above row r+1: lo[r] >= lo[r+1], hi[r] >= hi[r+1], lo[r] <= hi[r+1]
    let (lo_min, lo_max, hi_min) = if done == 0 {
        (0, 0, 0)
    } else {
        (lo[r + 1], hi[r + 1], hi[r + 1])
    };
    for l in lo_min..=lo_max {
        for len in 1..=left - remaining_rows {
            let h = l + len;
            if h < hi_min {
                continue;
            }
            lo[r] = l;
            hi[r] = h;
            build_rows(rows, done + 1, left - len, lo, hi, out);
        }
    }
}

/// Summary used by the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableauCounts {
    pub shape: String,
    pub standard: String,
    pub barely_formula: String,
    pub barely_enumerated: Option<String>,
    pub diagonally_unprimed_formula: Option<String>,
    pub diagonally_unprimed_enumerated: Option<String>,
}

pub fn skew_counts(s: &SkewShape, budget: usize) -> Result<TableauCounts> {
    let lattice = IdealLattice::new(&s.poset())?;
    Ok(TableauCounts {
        shape: shape_name(s),
        standard: lattice.count_maximal_chains().to_string(),
        barely_formula: count_barely_formula(s)?.to_string(),
        barely_enumerated: enumerate_barely(s, budget).ok().map(|c| c.to_string()),
        diagonally_unprimed_formula: None,
        diagonally_unprimed_enumerated: None,
    })
}

pub fn shifted_counts(lambda: &Partition, budget: usize) -> Result<TableauCounts> {
    Ok(TableauCounts {
        shape: format!("shifted:{lambda}"),
        standard: g_thrall(lambda)?.to_string(),
        barely_formula: count_shifted_barely_formula(lambda, false)?.to_string(),
        barely_enumerated: enumerate_shifted_barely(lambda, false, budget)
            .ok()
            .map(|c| c.to_string()),
        diagonally_unprimed_formula: Some(count_shifted_barely_formula(lambda, true)?.to_string()),
        diagonally_unprimed_enumerated: enumerate_shifted_barely(lambda, true, budget)
            .ok()
            .map(|c| c.to_string()),
    })
}

/// `straight:OUTER` or `skew:OUTER/INNER`.
pub fn shape_name(s: &SkewShape) -> String {
    let outer = Partition::new(s.outer().to_vec()).expect("normalized shape");
    let inner = Partition::new(s.inner().to_vec()).expect("normalized shape");
    if inner.size() == 0 {
        format!("straight:{outer}")
    } else {
        format!("skew:{outer}/{inner}")
    }
}

/// Small integer view, for tests and reports.
pub fn as_u64(x: &BigUint) -> Option<u64> {
    x.to_u64()
}
