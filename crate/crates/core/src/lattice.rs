//! Order ideals of a poset and the distributive lattice they form.

use std::collections::HashMap;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use num::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::rational::{qi, Q};

/// Default cap on the number of ideals `build_lattice` will enumerate.
pub const DEFAULT_BUDGET: usize = 1 << 24;

/// A downward-closed subset of a poset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    members: FixedBitSet,
}

impl Ideal {
    pub fn empty(n: usize) -> Ideal {
        Ideal {
            members: FixedBitSet::with_capacity(n),
        }
    }

    /// Checks downward closure against `poset`.
    pub fn from_members(poset: &Poset, members: &[usize]) -> Result<Ideal> {
        let n = poset.len();
        let mut set = FixedBitSet::with_capacity(n);
        for &p in members {
            if p >= n {
                return Err(Error::OutOfRange {
                    what: "element",
                    value: p,
                    max: n,
                });
            }
            set.insert(p);
        }
        for p in set.ones() {
            if !poset.strict_down_sets()[p].is_subset(&set) {
                return Err(Error::InvalidParameters(format!(
                    "{members:?} is not downward closed"
                )));
            }
        }
        Ok(Ideal { members: set })
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.contains(p)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn members(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    /// The maximal elements of the ideal, an antichain of `poset`.
    pub fn maximal(&self, poset: &Poset) -> Vec<usize> {
        self.members
            .ones()
            .filter(|&p| poset.upper_covers(p).iter().all(|&q| !self.contains(q)))
            .collect()
    }

    fn addable(&self, poset: &Poset, p: usize) -> bool {
        !self.contains(p) && poset.lower_covers(p).iter().all(|&q| self.contains(q))
    }
}

/// An exact rational value per ideal index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statistic {
    #[serde(with = "crate::rational::serde_qvec")]
    pub values: Vec<Q>,
}

impl Statistic {
    pub fn new(values: Vec<Q>) -> Statistic {
        Statistic { values }
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(values: I) -> Statistic {
        Statistic {
            values: values.into_iter().map(qi).collect(),
        }
    }

    pub fn constant(len: usize, c: Q) -> Statistic {
        Statistic {
            values: vec![c; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, other: &Statistic) -> Statistic {
        assert_eq!(self.len(), other.len());
        Statistic::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Statistic) -> Statistic {
        assert_eq!(self.len(), other.len());
        Statistic::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, c: &Q) -> Statistic {
        Statistic::new(self.values.iter().map(|v| v * c).collect())
    }
}

/// Debug dump of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDump {
    pub ideals: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
    pub ddeg: Vec<usize>,
}

/// `J(P)`, enumerated explicitly. Ideals are indexed by size, then
/// lexicographically by their sorted member lists.
#[derive(Debug)]
pub struct IdealLattice {
    base: Poset,
    ideals: Vec<Ideal>,
    index: HashMap<FixedBitSet, usize>,
    up: Vec<Vec<(usize, usize)>>,
    down: Vec<Vec<(usize, usize)>>,
    hasse: OnceLock<Poset>,
}

pub fn build_lattice(poset: &Poset) -> Result<IdealLattice> {
    IdealLattice::with_budget(poset, DEFAULT_BUDGET)
}

impl IdealLattice {
    pub fn new(poset: &Poset) -> Result<IdealLattice> {
        build_lattice(poset)
    }

    /// Enumerates ideals level by level from the empty ideal, failing once more
    /// than `budget` ideals have been produced.
    pub fn with_budget(poset: &Poset, budget: usize) -> Result<IdealLattice> {
        let n = poset.len();
        let mut ideals: Vec<Ideal> = vec![Ideal::empty(n)];
        let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
        index.insert(ideals[0].members.clone(), 0);
        let mut level_start = 0;
        while level_start < ideals.len() {
            let level_end = ideals.len();
            let mut next: Vec<FixedBitSet> = Vec::new();
            let mut seen: std::collections::HashSet<FixedBitSet> = Default::default();
            for ideal in &ideals[level_start..level_end] {
                for p in 0..n {
                    if ideal.addable(poset, p) {
                        let mut bigger = ideal.members.clone();
                        bigger.insert(p);
                        if seen.insert(bigger.clone()) {
                            next.push(bigger);
                        }
                    }
                }
            }
            if ideals.len() + next.len() > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            next.sort_by(|a, b| a.ones().cmp(b.ones()));
            for members in next {
                index.insert(members.clone(), ideals.len());
                ideals.push(Ideal { members });
            }
            level_start = level_end;
        }

        let count = ideals.len();
        let mut up = vec![Vec::new(); count];
        let mut down = vec![Vec::new(); count];
        for i in 0..count {
            for p in 0..n {
                if ideals[i].addable(poset, p) {
                    let mut bigger = ideals[i].members.clone();
                    bigger.insert(p);
                    let j = index[&bigger];
                    up[i].push((p, j));
                    down[j].push((p, i));
                }
            }
        }
        for d in &mut down {
            d.sort_unstable();
        }
        Ok(IdealLattice {
            base: poset.clone(),
            ideals,
            index,
            up,
            down,
            hasse: OnceLock::new(),
        })
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    pub fn ideal(&self, i: usize) -> &Ideal {
        &self.ideals[i]
    }

    pub fn index_of(&self, ideal: &Ideal) -> Option<usize> {
        self.index.get(&ideal.members).copied()
    }

    /// Index of the ideal with exactly these members.
    pub fn find(&self, members: &[usize]) -> Option<usize> {
        let mut set = FixedBitSet::with_capacity(self.base.len());
        for &p in members {
            if p >= self.base.len() {
                return None;
            }
            set.insert(p);
        }
        self.index.get(&set).copied()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.ideals.len() - 1
    }

    /// Pairs `(p, j)` with ideal `j` equal to ideal `i` plus `p`.
    pub fn upper_covers(&self, i: usize) -> &[(usize, usize)] {
        &self.up[i]
    }

    /// Pairs `(p, j)` with ideal `j` equal to ideal `i` minus `p`.
    pub fn lower_covers(&self, i: usize) -> &[(usize, usize)] {
        &self.down[i]
    }

    /// Hasse edges `(i, j)` of `J(P)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .up
            .iter()
            .enumerate()
            .flat_map(|(i, ups)| ups.iter().map(move |&(_, j)| (i, j)))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn edge_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    pub fn ddeg(&self, i: usize) -> usize {
        self.down[i].len()
    }

    pub fn ddeg_statistic(&self) -> Statistic {
        Statistic::from_ints(self.down.iter().map(|d| d.len() as i64))
    }

    /// `tau_p` on ideal indices: add or remove `p` when the result is an ideal, else do nothing.
    pub fn toggle(&self, i: usize, p: usize) -> usize {
        if let Some(&(_, j)) = self.up[i].iter().find(|&&(q, _)| q == p) {
            return j;
        }
        if let Some(&(_, j)) = self.down[i].iter().find(|&&(q, _)| q == p) {
            return j;
        }
        i
    }

    pub fn toggle_ideal(&self, ideal: &Ideal, p: usize) -> Ideal {
        let i = self.index_of(ideal).expect("ideal of this lattice");
        self.ideals[self.toggle(i, p)].clone()
    }

    pub fn can_add(&self, i: usize, p: usize) -> bool {
        self.up[i].iter().any(|&(q, _)| q == p)
    }

    pub fn can_remove(&self, i: usize, p: usize) -> bool {
        self.down[i].iter().any(|&(q, _)| q == p)
    }

    /// The indicator statistics `(T+_p, T-_p)`.
    pub fn toggleability(&self, p: usize) -> (Statistic, Statistic) {
        let plus = (0..self.len()).map(|i| self.can_add(i, p) as i64);
        let minus = (0..self.len()).map(|i| self.can_remove(i, p) as i64);
        (Statistic::from_ints(plus), Statistic::from_ints(minus))
    }

    /// `T_p = T+_p - T-_p`.
    pub fn signed_toggleability(&self, p: usize) -> Statistic {
        Statistic::from_ints(
            (0..self.len()).map(|i| self.can_add(i, p) as i64 - self.can_remove(i, p) as i64),
        )
    }

    /// Number of toggleable elements, equal to the degree in the Hasse diagram.
    pub fn jaggedness(&self, i: usize) -> usize {
        self.up[i].len() + self.down[i].len()
    }

    /// Index of `P \ I`, an ideal of the dual poset, looked up in `dual_lattice`.
    pub fn complement_in(&self, i: usize, dual_lattice: &IdealLattice) -> usize {
        let mut c = self.ideals[i].members.clone();
        c.toggle_range(..);
        dual_lattice.index[&c]
    }

    /// The lattice as a poset on ideal indices, ordered by inclusion.
    pub fn as_poset(&self) -> &Poset {
        self.hasse
            .get_or_init(|| Poset::from_covers_unchecked(self.len(), self.edges()))
    }

    /// Number of maximal chains, equal to the number of linear extensions of the base.
    pub fn count_maximal_chains(&self) -> BigUint {
        let mut ways = vec![BigUint::from(0u32); self.len()];
        ways[0] = BigUint::from(1u32);
        for i in 0..self.len() {
            let w = ways[i].clone();
            for &(_, j) in &self.up[i] {
                ways[j] += &w;
            }
        }
        ways.pop().unwrap()
    }

    pub fn dump(&self) -> LatticeDump {
        LatticeDump {
            ideals: self.ideals.iter().map(Ideal::members).collect(),
            edges: self.edges(),
            ddeg: (0..self.len()).map(|i| self.ddeg(i)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Poset {
        Poset::chain(2).direct_product(&Poset::chain(2))
    }

    #[test]
    fn square_lattice() {
        let l = build_lattice(&square()).unwrap();
        assert_eq!(l.len(), 6);
        assert_eq!(l.edge_count(), 6);
        let members: Vec<Vec<usize>> = l.ideals().iter().map(Ideal::members).collect();
        assert_eq!(
            members,
            vec![
                vec![],
                vec![0],
                vec![0, 1],
                vec![0, 2],
                vec![0, 1, 2],
                vec![0, 1, 2, 3]
            ]
        );
        let ddeg: Vec<usize> = (0..6).map(|i| l.ddeg(i)).collect();
        assert_eq!(ddeg, vec![0, 1, 1, 1, 2, 1]);
    }

    #[test]
    fn antichain_lattice() {
        let l = build_lattice(&Poset::antichain(2)).unwrap();
        assert_eq!((l.len(), l.edge_count()), (4, 4));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            IdealLattice::with_budget(&Poset::antichain(5), 31),
            Err(Error::BudgetExceeded(31))
        ));
        assert_eq!(
            IdealLattice::with_budget(&Poset::antichain(5), 32)
                .unwrap()
                .len(),
            32
        );
    }

    #[test]
    fn toggles_are_involutions() {
        let l = build_lattice(&square()).unwrap();
        assert_eq!(l.toggle(0, 0), l.find(&[0]).unwrap());
        for i in 0..l.len() {
            for p in 0..4 {
                let j = l.toggle(i, p);
                if j != i {
                    assert_eq!(l.toggle(j, p), i);
                }
            }
        }
        // element 3 is neither addable nor removable at {0}
        assert_eq!(l.toggle(1, 3), 1);
        let ideal = l.ideal(1).clone();
        assert_eq!(l.toggle_ideal(&ideal, 0), *l.ideal(0));
    }

    #[test]
    fn toggleability_tables() {
        let l = build_lattice(&square()).unwrap();
        let (plus, _) = l.toggleability(0);
        assert_eq!(plus, Statistic::from_ints([1, 0, 0, 0, 0, 0]));
        let mut total = Statistic::constant(l.len(), qi(0));
        for p in 0..4 {
            total = total.add(&l.toggleability(p).1);
        }
        assert_eq!(total, l.ddeg_statistic());
        for i in 0..l.len() {
            let degree = l.edges().iter().filter(|&&(a, b)| a == i || b == i).count();
            assert_eq!(l.jaggedness(i), degree);
        }
        let single = build_lattice(&Poset::chain(1)).unwrap();
        let (p, m) = single.toggleability(0);
        assert_eq!(p.add(&m), Statistic::constant(2, qi(1)));
    }

    #[test]
    fn ideal_validation() {
        let sq = square();
        assert!(Ideal::from_members(&sq, &[0, 1]).is_ok());
        assert!(Ideal::from_members(&sq, &[1]).is_err());
        assert_eq!(
            Ideal::from_members(&sq, &[0, 1, 2]).unwrap().maximal(&sq),
            vec![1, 2]
        );
    }

    #[test]
    fn maximal_chains_count_linear_extensions() {
        let l = build_lattice(&square()).unwrap();
        assert_eq!(l.count_maximal_chains(), BigUint::from(2u32));
        let l = build_lattice(&Poset::antichain(4)).unwrap();
        assert_eq!(l.count_maximal_chains(), BigUint::from(24u32));
    }
}
