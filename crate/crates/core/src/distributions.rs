//! Probability distributions on the elements of a poset, usually a lattice `J(P)`.
//!
//! Every distribution is a vector of exact rationals summing to one. The chain-type
//! distributions work on any finite poset; pass `lattice.as_poset()` to get them on `J(P)`.

use num::{BigInt, BigUint, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{IdealLattice, Statistic};
use crate::poset::Poset;
use crate::rational::{one, qbig, qi, zero, Q};

/// Exact weights, one per element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distribution {
    #[serde(with = "crate::rational::serde_qvec")]
    pub weights: Vec<Q>,
}

impl Distribution {
    /// Validates nonnegativity and total mass one.
    pub fn new(weights: Vec<Q>) -> Result<Distribution> {
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::InvalidParameters("negative weight".into()));
        }
        let total: Q = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidParameters(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Distribution { weights })
    }

    /// Normalizes nonnegative integer counts. All-zero counts are rejected.
    pub fn from_counts(counts: &[BigUint]) -> Result<Distribution> {
        let total: BigUint = counts.iter().sum();
        if total.is_zero() {
            return Err(Error::InvalidParameters("all counts are zero".into()));
        }
        let total = qbig(BigInt::from(total));
        Ok(Distribution {
            weights: counts
                .iter()
                .map(|c| qbig(BigInt::from(c.clone())) / &total)
                .collect(),
        })
    }

    fn from_rational_counts(counts: Vec<Q>) -> Distribution {
        let total: Q = counts.iter().sum();
        Distribution {
            weights: counts.into_iter().map(|c| c / &total).collect(),
        }
    }

    pub fn uniform(len: usize) -> Distribution {
        assert!(len > 0, "uniform distribution on an empty set");
        Distribution {
            weights: vec![Q::new(1.into(), len.into()); len],
        }
    }

    pub fn point_mass(len: usize, at: usize) -> Distribution {
        let mut weights = vec![zero(); len];
        weights[at] = one();
        Distribution { weights }
    }

    /// Uniform on the given indices, zero elsewhere.
    pub fn uniform_on(len: usize, indices: &[usize]) -> Distribution {
        let w = Q::new(1.into(), indices.len().into());
        let mut weights = vec![zero(); len];
        for &i in indices {
            weights[i] = w.clone();
        }
        Distribution { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Convex combination `sum c_i mu_i`; the coefficients are normalized first.
    pub fn mix(parts: &[(Q, &Distribution)]) -> Distribution {
        let len = parts[0].1.len();
        let total: Q = parts.iter().map(|(c, _)| c).sum();
        let mut weights = vec![zero(); len];
        for (c, mu) in parts {
            for (w, x) in weights.iter_mut().zip(&mu.weights) {
                *w += c * x;
            }
        }
        Distribution {
            weights: weights.into_iter().map(|w| w / &total).collect(),
        }
    }
}

/// `E(mu; f)`.
pub fn expectation(mu: &Distribution, f: &Statistic) -> Result<Q> {
    if mu.len() != f.len() {
        return Err(Error::LengthMismatch {
            expected: mu.len(),
            got: f.len(),
        });
    }
    Ok(mu.weights.iter().zip(&f.values).map(|(a, b)| a * b).sum())
}

/// Down-degree of every element, as a statistic.
pub fn ddeg_statistic(poset: &Poset) -> Statistic {
    Statistic::from_ints(poset.down_degrees().into_iter().map(|d| d as i64))
}

/// `E(uni; ddeg)`: Hasse edges over elements.
pub fn edge_density(poset: &Poset) -> Q {
    Q::new(poset.covers().len().into(), poset.len().into())
}

pub fn uniform(poset: &Poset) -> Distribution {
    Distribution::uniform(poset.len())
}

/// Mass `1/(r+2)` on each rank prefix `P_{<=i}`, `i = -1..r`, of a graded base poset.
pub fn rank_dist(lattice: &IdealLattice) -> Result<Distribution> {
    let base = lattice.base();
    let info = base.rank_info();
    if base.is_empty() {
        return Ok(Distribution::point_mass(1, 0));
    }
    if !info.is_graded {
        return Err(Error::NotGraded);
    }
    let rank = info.rank.unwrap();
    let r = info.top_rank.unwrap();
    let mut weights = vec![zero(); lattice.len()];
    let w = Q::new(1.into(), (r + 2).into());
    weights[lattice.bottom()] = w.clone();
    for i in 0..=r {
        let members: Vec<usize> = (0..base.len()).filter(|&p| rank[p] <= i).collect();
        let idx = lattice.find(&members).expect("rank prefix is an ideal");
        weights[idx] = w.clone();
    }
    Ok(Distribution { weights })
}

/// Counts of chains through each element, split by chain length.
#[derive(Clone, Debug)]
pub struct ChainCounts {
    /// `ending[j][p]`: `j`-chains whose top element is `p`.
    ending: Vec<Vec<BigUint>>,
    /// `starting[j][p]`: `j`-chains whose bottom element is `p`.
    starting: Vec<Vec<BigUint>>,
}

impl ChainCounts {
    pub fn new(poset: &Poset) -> ChainCounts {
        let n = poset.len();
        let below = poset.strict_down_sets();
        let height = poset.height();
        let mut ending = vec![vec![BigUint::one(); n]];
        let mut starting = vec![vec![BigUint::one(); n]];
        for j in 1..=height {
            let mut e = vec![BigUint::zero(); n];
            let mut s = vec![BigUint::zero(); n];
            for q in 0..n {
                for p in below[q].ones() {
                    e[q] += &ending[j - 1][p];
                    s[p] += &starting[j - 1][q];
                }
            }
            ending.push(e);
            starting.push(s);
        }
        if n == 0 {
            ending.clear();
            starting.clear();
        }
        ChainCounts { ending, starting }
    }

    /// Length of the longest chain.
    pub fn height(&self) -> usize {
        self.ending.len().saturating_sub(1)
    }

    /// Number of `k`-chains containing each element.
    pub fn through(&self, k: usize) -> Vec<BigUint> {
        let n = self.ending.first().map_or(0, Vec::len);
        if k > self.height() {
            return vec![BigUint::zero(); n];
        }
        (0..n)
            .map(|p| {
                (0..=k)
                    .map(|j| &self.ending[j][p] * &self.starting[k - j][p])
                    .sum()
            })
            .collect()
    }

    /// Number of `k`-chains.
    pub fn count(&self, k: usize) -> BigUint {
        if k > self.height() {
            return BigUint::zero();
        }
        self.ending[k].iter().sum()
    }
}

/// `chain(k)`: each element weighted by the number of `k`-chains through it.
pub fn chain_dist(poset: &Poset, k: usize) -> Result<Distribution> {
    let counts = ChainCounts::new(poset);
    chain_dist_from(&counts, k)
}

pub fn chain_dist_from(counts: &ChainCounts, k: usize) -> Result<Distribution> {
    if k > counts.height() {
        return Err(Error::OutOfRange {
            what: "chain length",
            value: k,
            max: counts.height(),
        });
    }
    Distribution::from_counts(&counts.through(k))
}

/// Each element weighted by the number of maximal chains through it.
pub fn maxchain_dist(poset: &Poset) -> Result<Distribution> {
    let n = poset.len();
    let topo = poset.linear_extension();
    let mut from_bottom = vec![BigUint::zero(); n];
    for &q in topo {
        from_bottom[q] = if poset.lower_covers(q).is_empty() {
            BigUint::one()
        } else {
            poset.lower_covers(q).iter().map(|&p| &from_bottom[p]).sum()
        };
    }
    let mut to_top = vec![BigUint::zero(); n];
    for &p in topo.iter().rev() {
        to_top[p] = if poset.upper_covers(p).is_empty() {
            BigUint::one()
        } else {
            poset.upper_covers(p).iter().map(|&q| &to_top[q]).sum()
        };
    }
    let through: Vec<BigUint> = (0..n).map(|p| &from_bottom[p] * &to_top[p]).collect();
    Distribution::from_counts(&through)
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `mchain(m)`: each element weighted by the number of `m`-multichains containing it.
/// A multichain with `k+1` distinct entries arises from `binom(m, k)` multiplicity patterns.
pub fn mchain_dist(poset: &Poset, m: usize) -> Result<Distribution> {
    let counts = ChainCounts::new(poset);
    let n = poset.len();
    let mut through = vec![BigUint::zero(); n];
    for k in 0..=m.min(counts.height()) {
        let b = binomial(m, k);
        for (t, x) in through.iter_mut().zip(counts.through(k)) {
            *t += &b * x;
        }
    }
    Distribution::from_counts(&through)
}

/// The modified distribution: each element weighted by its total number of
/// occurrences across all `m`-multichains.
pub fn mmchain_dist(poset: &Poset, m: usize) -> Result<Distribution> {
    let counts = ChainCounts::new(poset);
    let n = poset.len();
    // Summed over all multiplicity patterns, one support element of a k-chain
    // occurs (m+1) binom(m,k) / (k+1) times.
    let mut occ = vec![zero(); n];
    for k in 0..=m.min(counts.height()) {
        let c = qbig(BigInt::from(binomial(m, k) * BigUint::from(m + 1))) / qi((k + 1) as i64);
        for (o, x) in occ.iter_mut().zip(counts.through(k)) {
            *o += &c * qbig(BigInt::from(x));
        }
    }
    Ok(Distribution::from_rational_counts(occ))
}

/// The rotation of `k`-subsets of `[n]` that cyclically shifts the gaps
/// `(s_1, s_2 - s_1, ..., n + 1 - s_k)`.
pub fn zeta(n: usize, subset: &[usize]) -> Vec<usize> {
    let Some(&last) = subset.last() else {
        return Vec::new();
    };
    let shift = n + 1 - last;
    let mut out = vec![shift];
    out.extend(subset[..subset.len() - 1].iter().map(|&s| shift + s));
    out
}

/// The orbits of `zeta` on `k`-subsets of `[n]` (elements `1..=n`), each listed from
/// its lexicographically least member.
pub fn zeta_orbits(n: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut subsets = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..=n {
            cur.push(s);
            rec(s + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut subsets);
    let mut seen = std::collections::HashSet::new();
    let mut orbits = Vec::new();
    for s in subsets {
        if seen.contains(&s) {
            continue;
        }
        let mut orbit = vec![s.clone()];
        seen.insert(s.clone());
        let mut t = zeta(n, &s);
        while t != s {
            seen.insert(t.clone());
            orbit.push(t.clone());
            t = zeta(n, &t);
        }
        orbits.push(orbit);
    }
    orbits
}

/// Number of `zeta`-orbits on `k`-subsets of `[n]`.
pub fn necklace_count(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    zeta_orbits(n, k).len()
}

/// `sum over orbits O of |O| / (k+1)`. Each orbit contributes the occurrence total
/// `|O| (m+1) / (k+1)` for a fixed support position; for a free orbit this is `m+1`.
pub fn orbit_weight(m: usize, k: usize) -> Q {
    let total: usize = zeta_orbits(m, k).iter().map(Vec::len).sum();
    Q::new(total.into(), (k + 1).into())
}

/// `mchain(m)` as a convex combination of `chain(k)` with coefficients
/// `(k+1) #{k-chains} binom(m,k)`.
pub fn convert_chain_to_mchain(poset: &Poset, m: usize) -> Result<Distribution> {
    let counts = ChainCounts::new(poset);
    let mut parts = Vec::new();
    for k in 0..=m.min(counts.height()) {
        let c = BigUint::from(k + 1) * counts.count(k) * binomial(m, k);
        parts.push((qbig(BigInt::from(c)), chain_dist_from(&counts, k)?));
    }
    let refs: Vec<(Q, &Distribution)> = parts.iter().map(|(c, d)| (c.clone(), d)).collect();
    Ok(Distribution::mix(&refs))
}

/// `mmchain(m)` as a convex combination of `chain(k)` with coefficients
/// `(k+1) #{k-chains} w(m,k)`, where `w` is the orbit-size weighted count [`orbit_weight`].
pub fn convert_chain_to_mmchain(poset: &Poset, m: usize) -> Result<Distribution> {
    convert_chain_with(poset, m, orbit_weight)
}

/// The same combination weighted by the plain orbit count [`necklace_count`]. It agrees
/// with `mmchain(m)` only when every orbit is free, so it is kept for comparison.
pub fn convert_chain_by_orbit_count(poset: &Poset, m: usize) -> Result<Distribution> {
    convert_chain_with(poset, m, |m, k| qi(necklace_count(m, k) as i64))
}

fn convert_chain_with(
    poset: &Poset,
    m: usize,
    weight: impl Fn(usize, usize) -> Q,
) -> Result<Distribution> {
    let counts = ChainCounts::new(poset);
    let mut parts = Vec::new();
    for k in 0..=m.min(counts.height()) {
        let c = qbig(BigInt::from(BigUint::from(k + 1) * counts.count(k))) * weight(m, k);
        parts.push((c, chain_dist_from(&counts, k)?));
    }
    let refs: Vec<(Q, &Distribution)> = parts.iter().map(|(c, d)| (c.clone(), d)).collect();
    Ok(Distribution::mix(&refs))
}

/// `E(mu; T+_p) - E(mu; T-_p)` for every `p`.
pub fn toggle_imbalance(lattice: &IdealLattice, mu: &Distribution) -> Vec<Q> {
    let mut acc = vec![zero(); lattice.base().len()];
    for (i, w) in mu.weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        for &(p, _) in lattice.upper_covers(i) {
            acc[p] += w;
        }
        for &(p, _) in lattice.lower_covers(i) {
            acc[p] -= w;
        }
    }
    acc
}

/// `E(mu; T+_p) = E(mu; T-_p)` for every `p`.
pub fn is_toggle_symmetric(lattice: &IdealLattice, mu: &Distribution) -> bool {
    mu.len() == lattice.len() && toggle_imbalance(lattice, mu).iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;
    use crate::rational::q;

    fn fix_a() -> Poset {
        Poset::new(5, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 4)]).unwrap()
    }

    fn square() -> Poset {
        Poset::chain(2).direct_product(&Poset::chain(2))
    }

    fn e(mu: &Distribution, p: &Poset) -> Q {
        expectation(mu, &ddeg_statistic(p)).unwrap()
    }

    #[test]
    fn fix_a_values() {
        let p = fix_a();
        assert_eq!(edge_density(&p), qi(1));
        assert_eq!(e(&maxchain_dist(&p).unwrap(), &p), qi(1));
        assert_eq!(e(&chain_dist(&p, 1).unwrap(), &p), q(13, 14));
        assert!(chain_dist(&p, 3).is_err());
    }

    #[test]
    fn rank_distribution() {
        let l = build_lattice(&square()).unwrap();
        let mu = rank_dist(&l).unwrap();
        let quarter = q(1, 4);
        let expected: Vec<Q> = [1, 1, 0, 0, 1, 1]
            .iter()
            .map(|&b| if b == 1 { quarter.clone() } else { zero() })
            .collect();
        assert_eq!(mu.weights, expected);
        assert_eq!(expectation(&mu, &l.ddeg_statistic()).unwrap(), qi(1));
        let la = build_lattice(&fix_a()).unwrap();
        assert!(matches!(rank_dist(&la), Err(Error::NotGraded)));
    }

    #[test]
    fn chain_zero_is_uniform() {
        let l = build_lattice(&fix_a()).unwrap();
        let lp = l.as_poset();
        assert_eq!(chain_dist(lp, 0).unwrap(), uniform(lp));
        assert_eq!(mchain_dist(lp, 0).unwrap(), uniform(lp));
        assert_eq!(mmchain_dist(lp, 0).unwrap(), uniform(lp));
        let top = lp.height();
        assert_eq!(chain_dist(lp, top).unwrap(), maxchain_dist(lp).unwrap());
    }

    #[test]
    fn singleton_is_point_mass() {
        let p = Poset::chain(1);
        assert_eq!(maxchain_dist(&p).unwrap(), Distribution::point_mass(1, 0));
    }

    #[test]
    fn multichains_on_two_chain() {
        // 2-multichains of 0 < 1: 00 01 11 (mchain through-counts 2, 2) and
        // occurrence counts 3, 3.
        let p = Poset::chain(2);
        assert_eq!(mchain_dist(&p, 2).unwrap(), Distribution::uniform(2));
        assert_eq!(mmchain_dist(&p, 2).unwrap(), Distribution::uniform(2));
        let p3 = Poset::chain(3);
        // 2-multichains of a 3-chain: 10 in all; element 0 lies in 6 of them.
        assert_eq!(mchain_dist(&p3, 2).unwrap().weights[0], q(6, 18));
    }

    #[test]
    fn necklaces() {
        assert_eq!(necklace_count(5, 0), 1);
        assert_eq!(necklace_count(3, 1), 2);
        assert_eq!(necklace_count(4, 4), 1);
        let orbits = zeta_orbits(4, 2);
        assert_eq!(orbits.iter().map(Vec::len).sum::<usize>(), 6);
        assert_eq!(necklace_count(4, 2), orbits.len());
        assert_eq!(necklace_count(4, 2), 2);
        for n in 0..8 {
            for k in 0..=n {
                assert_eq!(
                    orbit_weight(n, k),
                    qbig(BigInt::from(binomial(n, k))) / qi((k + 1) as i64)
                );
                assert!(qi(necklace_count(n, k) as i64) >= orbit_weight(n, k));
            }
        }
    }

    #[test]
    fn orbit_count_weighting_is_not_the_modified_distribution() {
        // a, b < c with m = 1: occurrences are 3, 3, 4 out of 10.
        let v = Poset::new(3, &[(0, 2), (1, 2)]).unwrap();
        let direct = mmchain_dist(&v, 1).unwrap();
        assert_eq!(direct.weights, vec![q(3, 10), q(3, 10), q(4, 10)]);
        assert_eq!(convert_chain_to_mmchain(&v, 1).unwrap(), direct);
        let plain = convert_chain_by_orbit_count(&v, 1).unwrap();
        assert_eq!(plain.weights, vec![q(2, 7), q(2, 7), q(3, 7)]);
    }

    #[test]
    fn toggle_symmetry() {
        let l = build_lattice(&square()).unwrap();
        assert!(is_toggle_symmetric(&l, &Distribution::uniform(6)));
        assert!(!is_toggle_symmetric(&l, &Distribution::point_mass(6, 0)));
        for k in 0..=4 {
            assert!(is_toggle_symmetric(
                &l,
                &chain_dist(l.as_poset(), k).unwrap()
            ));
        }
    }

    #[test]
    fn validation() {
        assert!(Distribution::new(vec![q(1, 2), q(1, 2)]).is_ok());
        assert!(Distribution::new(vec![q(1, 2), q(1, 3)]).is_err());
        assert!(Distribution::new(vec![q(3, 2), q(-1, 2)]).is_err());
        assert!(expectation(&Distribution::uniform(2), &Statistic::from_ints([1])).is_err());
    }
}
