//! Rowmotion, gyration and other toggle-group elements acting on `J(P)`, with orbit
//! decompositions and homomesy checks.
//!
//! A word `[p_1, ..., p_k]` stands for `tau_{p_1} o ... o tau_{p_k}`, so `p_k` is toggled first.

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::distributions::{is_toggle_symmetric, Distribution};
use crate::error::{Error, Result};
use crate::lattice::{Ideal, IdealLattice, Statistic};
use crate::rational::{qi, Q};

/// A bijection on ideal indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealMap {
    image: Vec<usize>,
}

impl IdealMap {
    pub fn new(image: Vec<usize>) -> Result<IdealMap> {
        let mut seen = vec![false; image.len()];
        for &j in &image {
            if j >= image.len() || std::mem::replace(&mut seen[j], true) {
                return Err(Error::NotBijection);
            }
        }
        Ok(IdealMap { image })
    }

    pub fn identity(len: usize) -> IdealMap {
        IdealMap {
            image: (0..len).collect(),
        }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }
}

/// `down-closure(min(P \ I))`.
pub fn rowmotion(lattice: &IdealLattice, i: usize) -> usize {
    let poset = lattice.base();
    let mut bits = FixedBitSet::with_capacity(poset.len());
    for &(p, _) in lattice.upper_covers(i) {
        bits.insert(p);
        bits.union_with(&poset.strict_down_sets()[p]);
    }
    let members: Vec<usize> = bits.ones().collect();
    lattice.find(&members).expect("down-closures are ideals")
}

pub fn rowmotion_map(lattice: &IdealLattice) -> IdealMap {
    IdealMap {
        image: (0..lattice.len()).map(|i| rowmotion(lattice, i)).collect(),
    }
}

/// The toggle-group element `tau_{word[0]} o tau_{word[1]} o ...`.
pub fn word_map(lattice: &IdealLattice, word: &[usize]) -> Result<IdealMap> {
    let n = lattice.base().len();
    if let Some(&p) = word.iter().find(|&&p| p >= n) {
        return Err(Error::OutOfRange {
            what: "element",
            value: p,
            max: n,
        });
    }
    let image = (0..lattice.len())
        .map(|start| word.iter().rev().fold(start, |i, &p| lattice.toggle(i, p)))
        .collect();
    IdealMap::new(image)
}

/// Rowmotion as toggles along a linear extension, topmost element first.
pub fn rowmotion_by_toggles(lattice: &IdealLattice, extension: &[usize]) -> Result<IdealMap> {
    word_map(lattice, extension)
}

/// Rank of every base element, or an error when the base is not ranked.
pub fn ranks(lattice: &IdealLattice) -> Result<(Vec<usize>, usize)> {
    let info = lattice.base().rank_info();
    match (info.is_ranked, info.rank, info.top_rank) {
        (true, Some(rank), Some(top)) => Ok((rank, top)),
        _ => Err(Error::NotRanked),
    }
}

/// `tau_{sigma(0)} o ... o tau_{sigma(r)}` where `tau_i` toggles every element of rank `i`.
pub fn rank_permuted_rowmotion(lattice: &IdealLattice, sigma: &[usize]) -> Result<IdealMap> {
    let (rank, top) = ranks(lattice)?;
    let mut sorted = sigma.to_vec();
    sorted.sort_unstable();
    if sorted != (0..=top).collect::<Vec<_>>() {
        return Err(Error::InvalidParameters(format!(
            "{sigma:?} is not a permutation of 0..={top}"
        )));
    }
    let rank = &rank;
    let word: Vec<usize> = sigma
        .iter()
        .flat_map(|&r| (0..rank.len()).filter(move |&p| rank[p] == r))
        .collect();
    word_map(lattice, &word)
}

/// `(1, 3, 5, ..., 0, 2, 4, ...)`.
pub fn gyration_order(top: usize) -> Vec<usize> {
    (0..=top)
        .filter(|r| r % 2 == 1)
        .chain((0..=top).filter(|r| r % 2 == 0))
        .collect()
}

pub fn gyration_map(lattice: &IdealLattice) -> Result<IdealMap> {
    let (_, top) = ranks(lattice)?;
    rank_permuted_rowmotion(lattice, &gyration_order(top))
}

/// For each pair of adjacent ranks, whether the lower one is toggled first. Rank
/// toggles two or more apart commute, so this determines `Phi_row(sigma)` as a map.
pub fn orientation(sigma: &[usize]) -> Vec<bool> {
    let mut pos = vec![0; sigma.len()];
    for (i, &r) in sigma.iter().enumerate() {
        pos[r] = i;
    }
    // applied right to left: larger position means toggled earlier
    (0..sigma.len().saturating_sub(1))
        .map(|r| pos[r] > pos[r + 1])
        .collect()
}

/// One rank order per orientation of the `top` adjacent pairs: `2^top` orders that
/// between them realize every `Phi_row(sigma)`.
pub fn orientation_representatives(top: usize) -> Vec<Vec<usize>> {
    (0..1usize << top)
        .map(|mask| {
            // lower-first edges say rank r+1 comes before r in sigma; topologically sort
            let mut order: Vec<usize> = vec![0];
            for r in 0..top {
                let lower_first = mask >> r & 1 == 1;
                if lower_first {
                    // rank r toggled first means r sits to the right of r+1
                    let at = order.iter().position(|&x| x == r).unwrap();
                    order.insert(at, r + 1);
                } else {
                    let at = order.iter().position(|&x| x == r).unwrap();
                    order.insert(at + 1, r + 1);
                }
            }
            order
        })
        .collect()
}

/// Every permutation of `0..=top`; use only for small `top`.
pub fn all_rank_orders(top: usize) -> Vec<Vec<usize>> {
    (0..=top).permutations(top + 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDecomposition {
    /// Each orbit in map order, starting from its smallest index; sorted by that index.
    pub orbits: Vec<Vec<usize>>,
}

impl OrbitDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }

    /// Sorted orbit sizes.
    pub fn size_multiset(&self) -> Vec<usize> {
        let mut s = self.sizes();
        s.sort_unstable();
        s
    }

    /// The order of the map: lcm of the orbit sizes.
    pub fn order(&self) -> usize {
        self.orbits.iter().map(Vec::len).fold(1, num::integer::lcm)
    }
}

pub fn orbit_decomposition(map: &IdealMap) -> OrbitDecomposition {
    let mut seen = vec![false; map.len()];
    let mut orbits = Vec::new();
    for start in 0..map.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            orbit.push(i);
            i = map.apply(i);
        }
        orbits.push(orbit);
    }
    OrbitDecomposition { orbits }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomomesyReport {
    pub orbit_sizes: Vec<usize>,
    #[serde(with = "crate::rational::serde_qvec")]
    pub averages: Vec<Q>,
    pub homomesic: bool,
    /// The common average when homomesic.
    #[serde(with = "crate::rational::serde_qopt")]
    pub constant: Option<Q>,
}

pub fn homomesy_report(orbits: &OrbitDecomposition, stat: &Statistic) -> HomomesyReport {
    let averages: Vec<Q> = orbits
        .orbits
        .iter()
        .map(|o| {
            let total: Q = o.iter().map(|&i| stat.values[i].clone()).sum();
            total / qi(o.len() as i64)
        })
        .collect();
    let homomesic = averages.windows(2).all(|w| w[0] == w[1]);
    HomomesyReport {
        orbit_sizes: orbits.sizes(),
        constant: if homomesic {
            averages.first().cloned()
        } else {
            None
        },
        averages,
        homomesic,
    }
}

/// Antichain cardinality, which is the down-degree.
pub fn antichain_cardinality(lattice: &IdealLattice) -> Statistic {
    lattice.ddeg_statistic()
}

/// Orbits whose uniform distribution is not toggle-symmetric.
pub fn asymmetric_orbits(lattice: &IdealLattice, orbits: &OrbitDecomposition) -> Vec<Vec<usize>> {
    orbits
        .orbits
        .iter()
        .filter(|o| !is_toggle_symmetric(lattice, &Distribution::uniform_on(lattice.len(), o)))
        .cloned()
        .collect()
}

/// Named maps accepted on the command line: `rowmotion`, `gyration`, or `sigma:1,3,0,2`
/// (the `sigma:` prefix is optional).
pub fn parse_map(lattice: &IdealLattice, name: &str) -> Result<IdealMap> {
    match name {
        "rowmotion" => Ok(rowmotion_map(lattice)),
        "gyration" => gyration_map(lattice),
        other => {
            let list = other.strip_prefix("sigma:").unwrap_or(other);
            let sigma = list
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad rank {x:?} in map {name:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rank_permuted_rowmotion(lattice, &sigma)
        }
    }
}

/// Members of each ideal along the orbit of `start`.
pub fn orbit_of(lattice: &IdealLattice, map: &IdealMap, start: &Ideal) -> Option<Vec<Vec<usize>>> {
    let first = lattice.index_of(start)?;
    let mut out = vec![lattice.ideal(first).members()];
    let mut i = map.apply(first);
    while i != first {
        out.push(lattice.ideal(i).members());
        i = map.apply(i);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cde::certify_tcde;
    use crate::lattice::build_lattice;
    use crate::poset::Poset;
    use crate::shapes::{Partition, ShiftedShape, SkewShape};

    fn shifted_321() -> (ShiftedShape, IdealLattice) {
        let s = ShiftedShape::new(&Partition::staircase(3)).unwrap();
        let l = build_lattice(&s.poset()).unwrap();
        (s, l)
    }

    fn rows(s: &ShiftedShape, l: &IdealLattice, i: usize) -> Vec<usize> {
        s.ideal_partition(&l.ideal(i).members()).parts().to_vec()
    }

    #[test]
    fn rowmotion_on_shifted_staircase() {
        let (s, l) = shifted_321();
        let empty = l.bottom();
        assert_eq!(rows(&s, &l, rowmotion(&l, empty)), vec![1]);
        let two_one = (0..l.len())
            .find(|&i| rows(&s, &l, i) == vec![2, 1])
            .unwrap();
        assert_eq!(rows(&s, &l, rowmotion(&l, two_one)), vec![3]);
        assert_eq!(rowmotion(&l, l.top()), empty);
    }

    #[test]
    fn rowmotion_matches_every_linear_extension() {
        let fix_a = Poset::new(5, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 4)]).unwrap();
        let l = build_lattice(&fix_a).unwrap();
        let direct = rowmotion_map(&l);
        let mut count = 0;
        for ext in (0..5).permutations(5) {
            let ok = (0..5).all(|i| (0..i).all(|j| !fix_a.lt(ext[i], ext[j])));
            if ok {
                assert_eq!(rowmotion_by_toggles(&l, &ext).unwrap(), direct);
                count += 1;
            }
        }
        assert!(count > 1);
        assert_eq!(rank_permuted_rowmotion(&l, &[0, 1, 2]).unwrap(), direct);
    }

    #[test]
    fn gyration_orbit_of_empty_on_42() {
        let s = SkewShape::straight(&Partition::new(vec![4, 2]).unwrap());
        let l = build_lattice(&s.poset()).unwrap();
        let name = |m: &Vec<usize>| -> String {
            s.row_ends(m)
                .iter()
                .filter(|&&x| x > 0)
                .map(|x| x.to_string())
                .collect()
        };
        let gyr = gyration_map(&l).unwrap();
        let orbit = orbit_of(&l, &gyr, l.ideal(l.bottom())).unwrap();
        let names: Vec<String> = orbit.iter().map(name).collect();
        assert_eq!(names, ["", "21", "42", "3", "11", "2", "41", "32", "1"]);
        let row = rowmotion_map(&l);
        let orbit = orbit_of(&l, &row, l.ideal(l.bottom())).unwrap();
        let names: Vec<String> = orbit.iter().map(name).collect();
        assert_eq!(names, ["", "1", "21", "32", "4", "11", "2", "31", "42"]);
    }

    #[test]
    fn orientations_cover_all_rank_orders() {
        let (_, l) = shifted_321();
        let (_, top) = ranks(&l).unwrap();
        let reps = orientation_representatives(top);
        assert_eq!(reps.len(), 1 << top);
        for sigma in all_rank_orders(top) {
            let rep = reps
                .iter()
                .find(|r| orientation(r) == orientation(&sigma))
                .unwrap();
            assert_eq!(
                rank_permuted_rowmotion(&l, &sigma).unwrap(),
                rank_permuted_rowmotion(&l, rep).unwrap()
            );
        }
    }

    #[test]
    fn orbit_structure_and_homomesy_on_grid() {
        let grid = Poset::chain(2).direct_product(&Poset::chain(2));
        let l = build_lattice(&grid).unwrap();
        let orbits = orbit_decomposition(&rowmotion_map(&l));
        assert_eq!(orbits.size_multiset(), vec![2, 4]);
        assert_eq!(orbits.order(), 4);
        let report = homomesy_report(&orbits, &antichain_cardinality(&l));
        assert!(report.homomesic);
        assert_eq!(report.constant, Some(qi(1)));
        let id = orbit_decomposition(&IdealMap::identity(l.len()));
        assert_eq!(id.size_multiset(), vec![1; 6]);
    }

    #[test]
    fn orbits_are_toggle_symmetric_on_staircase() {
        let (_, l) = shifted_321();
        let c = certify_tcde(&l).unwrap().c;
        let (_, top) = ranks(&l).unwrap();
        let base = orbit_decomposition(&rowmotion_map(&l)).size_multiset();
        for sigma in orientation_representatives(top) {
            let orbits = orbit_decomposition(&rank_permuted_rowmotion(&l, &sigma).unwrap());
            assert_eq!(orbits.size_multiset(), base);
            assert!(asymmetric_orbits(&l, &orbits).is_empty());
            let r = homomesy_report(&orbits, &antichain_cardinality(&l));
            assert_eq!(r.constant, Some(c.clone()));
        }
    }

    #[test]
    fn promotion_on_v_is_not_homomesic() {
        // a = 0, b = 1, c = 2
        let v = Poset::new(3, &[(0, 2), (1, 2)]).unwrap();
        let l = build_lattice(&v).unwrap();
        let map = word_map(&l, &[1, 2, 0]).unwrap();
        let orbits = orbit_decomposition(&map);
        let pair = orbits
            .orbits
            .iter()
            .find(|o| o.contains(&l.bottom()))
            .unwrap();
        let mut members: Vec<Vec<usize>> = pair.iter().map(|&i| l.ideal(i).members()).collect();
        members.sort();
        assert_eq!(members, vec![vec![], vec![0, 1]]);
        assert!(!homomesy_report(&orbits, &l.signed_toggleability(2)).homomesic);
        assert!(!asymmetric_orbits(&l, &orbits).is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(IdealMap::new(vec![0, 0]).is_err());
        let pentagon = Poset::new(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        let l = build_lattice(&pentagon).unwrap();
        assert!(gyration_map(&l).is_err());
        let (_, l) = shifted_321();
        assert!(rank_permuted_rowmotion(&l, &[0, 1]).is_err());
        assert!(parse_map(&l, "sigma:0,1,x").is_err());
        assert_eq!(parse_map(&l, "0,1,2,3,4").unwrap(), rowmotion_map(&l));
    }
}
