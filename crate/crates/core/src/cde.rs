//! Coincidental down-degree expectations: the CDE and mCDE predicates, and exact
//! certificates or counterexamples for the toggle-symmetric version (tCDE).
//!
//! A lattice `J(P)` is tCDE iff `ddeg - c` lies in the span of the signed toggle
//! statistics `T_p = T+_p - T-_p` for some constant `c`. One direction is immediate:
//! each `T_p` has zero expectation under a toggle-symmetric distribution. For the other,
//! the uniform distribution is toggle-symmetric and strictly positive, so it sits in the
//! relative interior of the toggle-symmetric polytope. A linear functional constant on
//! that polytope is then constant on its whole affine hull `{sum mu = 1, <T_p, mu> = 0}`,
//! which by duality means it lies in the span of `1` and the `T_p`. When the solve fails,
//! [`find_witness`] builds a toggle-symmetric distribution with a different expectation.

use num::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{
    chain_dist_from, ddeg_statistic, edge_density, expectation, is_toggle_symmetric, maxchain_dist,
    ChainCounts, Distribution,
};
use crate::error::Result;
use crate::lattice::{IdealLattice, Statistic};
use crate::linalg::{dot, rref, solve};
use crate::poset::Poset;
use crate::rational::{one, q, qi, zero, Q};

/// Down-degree expectations of one poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdeReport {
    #[serde(with = "crate::rational::serde_q")]
    pub edge_density: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub maxchain_expectation: Q,
    #[serde(with = "crate::rational::serde_qvec")]
    pub chain_expectations: Vec<Q>,
    pub is_cde: bool,
    pub is_mcde: bool,
}

/// Expected down-degree under uniform, maximal-chain and every `k`-chain distribution.
pub fn cde_report(poset: &Poset) -> Result<CdeReport> {
    let ddeg = ddeg_statistic(poset);
    let density = edge_density(poset);
    let maxchain = expectation(&maxchain_dist(poset)?, &ddeg)?;
    let counts = ChainCounts::new(poset);
    let chain_expectations = (0..=counts.height())
        .map(|k| expectation(&chain_dist_from(&counts, k)?, &ddeg))
        .collect::<Result<Vec<Q>>>()?;
    Ok(CdeReport {
        is_cde: maxchain == density,
        is_mcde: chain_expectations.iter().all(|e| *e == density),
        edge_density: density,
        maxchain_expectation: maxchain,
        chain_expectations,
    })
}

/// `ddeg = c + sum_p kappa_p T_p + sum_j extra_j S_j` pointwise on `J(P)`, where the `S_j`
/// are optional extra statistics with zero expectation on the distributions of interest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TcdeCertificate {
    #[serde(with = "crate::rational::serde_q")]
    pub c: Q,
    #[serde(with = "crate::rational::serde_qvec")]
    pub kappa: Vec<Q>,
    #[serde(default, with = "crate::rational::serde_qvec")]
    pub extra: Vec<Q>,
}

impl TcdeCertificate {
    /// Index of the first ideal where the identity fails, if any.
    pub fn first_failure(&self, lattice: &IdealLattice, extra: &[Statistic]) -> Option<usize> {
        if self.kappa.len() != lattice.base().len() || self.extra.len() != extra.len() {
            return Some(0);
        }
        (0..lattice.len()).find(|&i| {
            let mut rhs = self.c.clone();
            for &(p, _) in lattice.upper_covers(i) {
                rhs += &self.kappa[p];
            }
            for &(p, _) in lattice.lower_covers(i) {
                rhs -= &self.kappa[p];
            }
            for (e, s) in self.extra.iter().zip(extra) {
                rhs += e * &s.values[i];
            }
            rhs != qi(lattice.ddeg(i) as i64)
        })
    }

    pub fn verify(&self, lattice: &IdealLattice) -> bool {
        self.first_failure(lattice, &[]).is_none()
    }
}

/// A toggle-symmetric distribution whose expected down-degree differs from the edge density.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TcdeWitness {
    pub mu: Distribution,
    #[serde(with = "crate::rational::serde_q")]
    pub expectation: Q,
}

impl TcdeWitness {
    pub fn validate(&self, lattice: &IdealLattice) -> bool {
        let density = edge_density(lattice.as_poset());
        is_toggle_symmetric(lattice, &self.mu)
            && expectation(&self.mu, &lattice.ddeg_statistic()).ok()
                == Some(self.expectation.clone())
            && self.expectation != density
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TcdeOutcome {
    Certificate(TcdeCertificate),
    Witness(TcdeWitness),
}

/// Coefficient columns `[1, T_0, ..., T_{n-1}, extras...]` as rows over ideals.
fn toggle_matrix(lattice: &IdealLattice, extra: &[Statistic]) -> Vec<Vec<Q>> {
    let n = lattice.base().len();
    (0..lattice.len())
        .map(|i| {
            let mut row = vec![zero(); n + 1 + extra.len()];
            row[0] = one();
            for &(p, _) in lattice.upper_covers(i) {
                row[1 + p] = one();
            }
            for &(p, _) in lattice.lower_covers(i) {
                row[1 + p] = -one();
            }
            for (j, s) in extra.iter().enumerate() {
                row[1 + n + j] = s.values[i].clone();
            }
            row
        })
        .collect()
}

/// Solves for a certificate with no extra statistics.
pub fn certify_tcde(lattice: &IdealLattice) -> Option<TcdeCertificate> {
    certify_tcde_with(lattice, &[])
}

/// Solves for a certificate that may also use the given extra statistics.
pub fn certify_tcde_with(lattice: &IdealLattice, extra: &[Statistic]) -> Option<TcdeCertificate> {
    let n = lattice.base().len();
    let a = toggle_matrix(lattice, extra);
    let b: Vec<Q> = (0..lattice.len())
        .map(|i| qi(lattice.ddeg(i) as i64))
        .collect();
    let x = solve(&a, &b)?;
    Some(TcdeCertificate {
        c: x[0].clone(),
        kappa: x[1..=n].to_vec(),
        extra: x[n + 1..].to_vec(),
    })
}

/// `e_bottom - e_top`: zero in expectation exactly when the empty and full ideals are
/// equally likely.
pub fn bottom_top_balance(lattice: &IdealLattice) -> Statistic {
    let mut v = vec![zero(); lattice.len()];
    v[lattice.bottom()] = one();
    v[lattice.top()] = -one();
    Statistic::new(v)
}

/// Row-reduced constraint system `{sum v = 0, <T_p, v> = 0, <S_j, v> = 0}` on ideal space.
fn kernel_system(lattice: &IdealLattice, extra: &[Statistic]) -> (Vec<Vec<Q>>, Vec<usize>) {
    let a = toggle_matrix(lattice, extra);
    let cols = a.first().map_or(0, Vec::len);
    let mut t: Vec<Vec<Q>> = (0..cols)
        .map(|c| a.iter().map(|row| row[c].clone()).collect())
        .collect();
    let pivots = rref(&mut t);
    t.truncate(pivots.len());
    (t, pivots)
}

fn kernel_vector(reduced: &[Vec<Q>], pivots: &[usize], free: usize, len: usize) -> Vec<Q> {
    let mut v = vec![zero(); len];
    v[free] = one();
    for (row, &c) in pivots.iter().enumerate() {
        v[c] = -reduced[row][free].clone();
    }
    v
}

/// A basis of the directions along which toggle-symmetric distributions can move.
pub fn toggle_symmetric_kernel(lattice: &IdealLattice) -> Vec<Vec<Q>> {
    let (reduced, pivots) = kernel_system(lattice, &[]);
    let mut is_pivot = vec![false; lattice.len()];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..lattice.len())
        .filter(|&f| !is_pivot[f])
        .map(|f| kernel_vector(&reduced, &pivots, f, lattice.len()))
        .collect()
}

/// Uniform plus half the largest step along `v` that keeps every weight nonnegative.
pub fn perturb_uniform(v: &[Q]) -> Distribution {
    let len = v.len();
    let base = Q::new(1.into(), len.into());
    let step = v
        .iter()
        .filter(|x| x.is_negative())
        .map(|x| &base / -x)
        .min()
        .unwrap_or_else(one);
    let eps = step * q(1, 2);
    Distribution {
        weights: v.iter().map(|x| &base + &eps * x).collect(),
    }
}

pub fn find_witness(lattice: &IdealLattice) -> Option<TcdeWitness> {
    find_witness_with(lattice, &[])
}

/// A toggle-symmetric distribution (also orthogonal to `extra`) whose expected down-degree
/// differs from the edge density, or `None` when the lattice certifies.
pub fn find_witness_with(lattice: &IdealLattice, extra: &[Statistic]) -> Option<TcdeWitness> {
    let len = lattice.len();
    let (reduced, pivots) = kernel_system(lattice, extra);
    let ddeg: Vec<Q> = (0..len).map(|i| qi(lattice.ddeg(i) as i64)).collect();
    let mut is_pivot = vec![false; len];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let free = (0..len).filter(|&f| !is_pivot[f]).find(|&f| {
        let mut pairing = ddeg[f].clone();
        for (row, &c) in pivots.iter().enumerate() {
            pairing -= &reduced[row][f] * &ddeg[c];
        }
        !pairing.is_zero()
    })?;
    let v = kernel_vector(&reduced, &pivots, free, len);
    debug_assert!(!dot(&v, &ddeg).is_zero());
    let mu = perturb_uniform(&v);
    let expectation = dot(&mu.weights, &ddeg);
    Some(TcdeWitness { mu, expectation })
}

/// Certificate if one exists, otherwise a witness.
pub fn decide_tcde(lattice: &IdealLattice) -> TcdeOutcome {
    match certify_tcde(lattice) {
        Some(c) => TcdeOutcome::Certificate(c),
        None => TcdeOutcome::Witness(
            find_witness(lattice).expect("a lattice without certificate has a witness"),
        ),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Predicate {
    Cde,
    Mcde,
    Tcde,
}

/// One line of a family scan over lattices `J(P)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub name: String,
    pub ideals: usize,
    pub report: Option<CdeReport>,
    #[serde(default, with = "crate::rational::serde_qopt")]
    pub tcde_constant: Option<Q>,
    pub holds: Option<bool>,
    pub error: Option<String>,
}

/// Analyzes `J(P)` for every named poset, in parallel, preserving input order.
pub fn scan_family<I>(inputs: I, predicate: Predicate, budget: usize) -> Vec<ScanRecord>
where
    I: IntoIterator<Item = (String, Poset)>,
{
    let inputs: Vec<(String, Poset)> = inputs.into_iter().collect();
    inputs
        .into_par_iter()
        .map(|(name, poset)| scan_one(name, &poset, predicate, budget))
        .collect()
}

fn scan_one(name: String, poset: &Poset, predicate: Predicate, budget: usize) -> ScanRecord {
    let lattice = match IdealLattice::with_budget(poset, budget) {
        Ok(l) => l,
        Err(e) => {
            return ScanRecord {
                name,
                ideals: 0,
                report: None,
                tcde_constant: None,
                holds: None,
                error: Some(e.to_string()),
            }
        }
    };
    let report = cde_report(lattice.as_poset()).ok();
    let tcde_constant = match predicate {
        Predicate::Tcde => certify_tcde(&lattice).map(|c| c.c),
        _ => None,
    };
    let holds = match predicate {
        Predicate::Cde => report.as_ref().map(|r| r.is_cde),
        Predicate::Mcde => report.as_ref().map(|r| r.is_mcde),
        Predicate::Tcde => Some(tcde_constant.is_some()),
    };
    ScanRecord {
        name,
        ideals: lattice.len(),
        report,
        tcde_constant,
        holds,
        error: None,
    }
}
