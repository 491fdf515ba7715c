//! Finite posets stored by their cover relations.

use std::collections::VecDeque;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite poset on `0..n`, kept as the transitive reduction of its order.
#[derive(Clone, Debug)]
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    topo: Vec<usize>,
    below: OnceLock<Vec<FixedBitSet>>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.covers == other.covers && self.labels == other.labels
    }
}

impl Eq for Poset {}

/// Rank data for a poset. Each connected component is ranked on its own,
/// with its lowest elements at rank 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankInfo {
    pub is_ranked: bool,
    pub is_graded: bool,
    pub rank: Option<Vec<usize>>,
    pub top_rank: Option<usize>,
}

/// A strictly increasing sequence `c_0 < c_1 < ... < c_k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chain {
    pub elements: Vec<usize>,
}

impl Chain {
    pub fn length(&self) -> usize {
        self.elements.len().saturating_sub(1)
    }
}

/// On-disk poset description: `{"n": 5, "labels": [...], "relations": [[0,2], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub relations: Vec<[usize; 2]>,
}

impl Poset {
    /// Builds a poset from arbitrary order relations `p < q`, reducing them to covers.
    pub fn new(n: usize, relations: &[(usize, usize)]) -> Result<Poset> {
        let mut succ = vec![Vec::new(); n];
        for &(p, q) in relations {
            if p >= n || q >= n {
                return Err(Error::ElementOutOfRange(p, q, n));
            }
            if p == q {
                return Err(Error::Cycle(vec![p]));
            }
            succ[p].push(q);
        }
        let topo = topological_order(n, &succ)?;

        let mut below = vec![FixedBitSet::with_capacity(n); n];
        let mut pred = vec![Vec::new(); n];
        for (p, qs) in succ.iter().enumerate() {
            for &q in qs {
                pred[q].push(p);
            }
        }
        for &q in &topo {
            let mut b = FixedBitSet::with_capacity(n);
            for &p in &pred[q] {
                b.union_with(&below[p]);
                b.insert(p);
            }
            below[q] = b;
        }

        let mut covers = Vec::new();
        for q in 0..n {
            let mut implied = FixedBitSet::with_capacity(n);
            for r in below[q].ones() {
                implied.union_with(&below[r]);
            }
            for p in below[q].difference(&implied) {
                covers.push((p, q));
            }
        }
        let poset = Poset::assemble(n, covers, None, Some(topo));
        let _ = poset.below.set(below);
        Ok(poset)
    }

    /// Builds a poset from pairs already known to be the cover relation of an acyclic order.
    /// No reduction is performed; the caller is responsible for the invariant.
    pub fn from_covers_unchecked(n: usize, covers: Vec<(usize, usize)>) -> Poset {
        Poset::assemble(n, covers, None, None)
    }

    fn assemble(
        n: usize,
        mut covers: Vec<(usize, usize)>,
        labels: Option<Vec<String>>,
        topo: Option<Vec<usize>>,
    ) -> Poset {
        covers.sort_unstable();
        covers.dedup();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(p, q) in &covers {
            up[p].push(q);
            down[q].push(p);
        }
        let topo = topo
            .unwrap_or_else(|| topological_order(n, &up).expect("cover relation must be acyclic"));
        Poset {
            n,
            covers,
            up,
            down,
            labels,
            topo,
            below: OnceLock::new(),
        }
    }

    pub fn from_file(file: &PosetFile) -> Result<Poset> {
        let rel: Vec<(usize, usize)> = file.relations.iter().map(|r| (r[0], r[1])).collect();
        let p = Poset::new(file.n, &rel)?;
        match &file.labels {
            Some(l) if l.len() != file.n => Err(Error::LengthMismatch {
                expected: file.n,
                got: l.len(),
            }),
            Some(l) => Ok(p.with_labels(l.clone())),
            None => Ok(p),
        }
    }

    pub fn from_json(text: &str) -> Result<Poset> {
        let file: PosetFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Poset::from_file(&file)
    }

    pub fn to_file(&self) -> PosetFile {
        PosetFile {
            n: self.n,
            labels: self.labels.clone(),
            relations: self.covers.iter().map(|&(p, q)| [p, q]).collect(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Poset {
        assert_eq!(labels.len(), self.n, "one label per element");
        self.labels = Some(labels);
        self
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Poset {
        let covers = (1..n).map(|i| (i - 1, i)).collect();
        Poset::assemble(n, covers, None, Some((0..n).collect()))
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::assemble(n, Vec::new(), None, Some((0..n).collect()))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, p: usize) -> &[usize] {
        &self.up[p]
    }

    pub fn lower_covers(&self, p: usize) -> &[usize] {
        &self.down[p]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, p: usize) -> String {
        match &self.labels {
            Some(l) => l[p].clone(),
            None => p.to_string(),
        }
    }

    /// A linear extension: every element appears after all elements below it.
    pub fn linear_extension(&self) -> &[usize] {
        &self.topo
    }

    /// Strict down-sets `{p : p < q}` for every `q`.
    pub fn strict_down_sets(&self) -> &[FixedBitSet] {
        self.below.get_or_init(|| {
            let mut below = vec![FixedBitSet::with_capacity(self.n); self.n];
            for &q in &self.topo {
                let mut b = FixedBitSet::with_capacity(self.n);
                for &p in &self.down[q] {
                    b.union_with(&below[p]);
                    b.insert(p);
                }
                below[q] = b;
            }
            below
        })
    }

    pub fn lt(&self, p: usize, q: usize) -> bool {
        self.strict_down_sets()[q].contains(p)
    }

    pub fn le(&self, p: usize, q: usize) -> bool {
        p == q || self.lt(p, q)
    }

    pub fn comparable(&self, p: usize, q: usize) -> bool {
        self.le(p, q) || self.lt(q, p)
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&p| self.down[p].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&p| self.up[p].is_empty()).collect()
    }

    /// Number of elements each element covers.
    pub fn down_degrees(&self) -> Vec<usize> {
        self.down.iter().map(Vec::len).collect()
    }

    /// Connected components of the cover graph, each sorted, ordered by least element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(p) = queue.pop_front() {
                for &q in self.up[p].iter().chain(&self.down[p]) {
                    if comp[q] == usize::MAX {
                        comp[q] = id;
                        members.push(q);
                        queue.push_back(q);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn dual(&self) -> Poset {
        let covers = self.covers.iter().map(|&(p, q)| (q, p)).collect();
        let topo = self.topo.iter().rev().copied().collect();
        Poset::assemble(self.n, covers, self.labels.clone(), Some(topo))
    }

    /// `P + Q`: elements of `P` keep their ids, elements of `Q` are shifted by `#P`.
    pub fn disjoint_union(&self, other: &Poset) -> Poset {
        let n = self.n + other.n;
        let mut covers = self.covers.clone();
        covers.extend(other.covers.iter().map(|&(p, q)| (p + self.n, q + self.n)));
        let labels = if self.labels.is_some() || other.labels.is_some() {
            let mut l: Vec<String> = (0..self.n).map(|p| self.label(p)).collect();
            l.extend((0..other.n).map(|p| other.label(p)));
            Some(l)
        } else {
            None
        };
        Poset::assemble(n, covers, labels, None)
    }

    /// `P x Q` with `(p, q)` stored at id `p * #Q + q`.
    pub fn direct_product(&self, other: &Poset) -> Poset {
        let m = other.n;
        let id = |p: usize, q: usize| p * m + q;
        let mut covers = Vec::new();
        for p in 0..self.n {
            for q in 0..m {
                for &p2 in &self.up[p] {
                    covers.push((id(p, q), id(p2, q)));
                }
                for &q2 in &other.up[q] {
                    covers.push((id(p, q), id(p, q2)));
                }
            }
        }
        let labels = if self.labels.is_some() || other.labels.is_some() {
            let mut l = Vec::with_capacity(self.n * m);
            for p in 0..self.n {
                for q in 0..m {
                    l.push(format!("({},{})", self.label(p), other.label(q)));
                }
            }
            Some(l)
        } else {
            None
        };
        Poset::assemble(self.n * m, covers, labels, None)
    }

    pub fn rank_info(&self) -> RankInfo {
        let mut rank: Vec<i64> = vec![i64::MIN; self.n];
        let mut ranked = true;
        for comp in self.components() {
            let s = comp[0];
            rank[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(p) = queue.pop_front() {
                let rp = rank[p];
                let steps = self.up[p]
                    .iter()
                    .map(|&q| (q, rp + 1))
                    .chain(self.down[p].iter().map(|&q| (q, rp - 1)));
                for (q, r) in steps {
                    if rank[q] == i64::MIN {
                        rank[q] = r;
                        queue.push_back(q);
                    } else if rank[q] != r {
                        ranked = false;
                    }
                }
            }
            if !ranked {
                break;
            }
            let low = comp.iter().map(|&p| rank[p]).min().unwrap_or(0);
            for &p in &comp {
                rank[p] -= low;
            }
        }
        if !ranked {
            return RankInfo {
                is_ranked: false,
                is_graded: false,
                rank: None,
                top_rank: None,
            };
        }
        let rank: Vec<usize> = rank.into_iter().map(|r| r as usize).collect();
        let top = rank.iter().copied().max();
        let graded = self.minimal_elements().iter().all(|&p| rank[p] == 0)
            && self
                .maximal_elements()
                .iter()
                .all(|&p| Some(rank[p]) == top);
        RankInfo {
            is_ranked: true,
            is_graded: graded,
            rank: Some(rank),
            top_rank: top,
        }
    }

    /// Length of the longest chain (0 for a nonempty antichain, 0 for the empty poset).
    pub fn height(&self) -> usize {
        let mut h = vec![0usize; self.n];
        for &q in &self.topo {
            h[q] = self.down[q].iter().map(|&p| h[p] + 1).max().unwrap_or(0);
        }
        h.into_iter().max().unwrap_or(0)
    }

    /// All `k`-chains, or with `maximal_only` all maximal chains of any length (`k` is then ignored).
    pub fn enumerate_chains(&self, k: usize, maximal_only: bool) -> Vec<Chain> {
        let mut out = Vec::new();
        if maximal_only {
            let mut stack = Vec::new();
            for p in self.minimal_elements() {
                stack.push(p);
                self.extend_saturated(&mut stack, &mut out);
                stack.pop();
            }
        } else {
            let mut stack = Vec::new();
            for p in 0..self.n {
                stack.push(p);
                self.extend_strict(k, &mut stack, &mut out);
                stack.pop();
            }
        }
        out.sort();
        out
    }

    fn extend_saturated(&self, stack: &mut Vec<usize>, out: &mut Vec<Chain>) {
        let last = *stack.last().unwrap();
        if self.up[last].is_empty() {
            out.push(Chain {
                elements: stack.clone(),
            });
            return;
        }
        for &q in &self.up[last] {
            stack.push(q);
            self.extend_saturated(stack, out);
            stack.pop();
        }
    }

    fn extend_strict(&self, k: usize, stack: &mut Vec<usize>, out: &mut Vec<Chain>) {
        if stack.len() == k + 1 {
            out.push(Chain {
                elements: stack.clone(),
            });
            return;
        }
        let last = *stack.last().unwrap();
        for q in 0..self.n {
            if self.lt(last, q) {
                stack.push(q);
                self.extend_strict(k, stack, out);
                stack.pop();
            }
        }
    }

    /// An isomorphism `self -> other` as an id map, found by backtracking.
    pub fn isomorphism(&self, other: &Poset) -> Option<Vec<usize>> {
        if self.n != other.n || self.covers.len() != other.covers.len() {
            return None;
        }
        let sig = |p: &Poset| -> Vec<(usize, usize, usize)> {
            let depth = p.depths();
            (0..p.n)
                .map(|x| (p.down[x].len(), p.up[x].len(), depth[x]))
                .collect()
        };
        let (sa, sb) = (sig(self), sig(other));
        let mut ka = sa.clone();
        let mut kb = sb.clone();
        ka.sort_unstable();
        kb.sort_unstable();
        if ka != kb {
            return None;
        }
        let order: Vec<usize> = bfs_order(self);
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        if self.iso_step(other, &order, 0, &sa, &sb, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn iso_step(
        &self,
        other: &Poset,
        order: &[usize],
        i: usize,
        sa: &[(usize, usize, usize)],
        sb: &[(usize, usize, usize)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for w in 0..other.n {
            if used[w] || sa[v] != sb[w] {
                continue;
            }
            let consistent = self.up[v]
                .iter()
                .filter(|&&u| map[u] != usize::MAX)
                .all(|&u| other.up[w].contains(&map[u]))
                && self.down[v]
                    .iter()
                    .filter(|&&u| map[u] != usize::MAX)
                    .all(|&u| other.down[w].contains(&map[u]))
                && other.up[w]
                    .iter()
                    .chain(&other.down[w])
                    .filter(|&&x| used[x])
                    .count()
                    == self.up[v]
                        .iter()
                        .chain(&self.down[v])
                        .filter(|&&u| map[u] != usize::MAX)
                        .count();
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if self.iso_step(other, order, i + 1, sa, sb, map, used) {
                return true;
            }
            map[v] = usize::MAX;
            used[w] = false;
        }
        false
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        self.isomorphism(other).is_some()
    }

    /// Length of the longest chain ending at each element.
    fn depths(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.n];
        for &q in &self.topo {
            h[q] = self.down[q].iter().map(|&p| h[p] + 1).max().unwrap_or(0);
        }
        h
    }
}

fn bfs_order(p: &Poset) -> Vec<usize> {
    let mut seen = vec![false; p.n];
    let mut out = Vec::with_capacity(p.n);
    for &s in &p.topo {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            out.push(x);
            for &y in p.up[x].iter().chain(&p.down[x]) {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    out
}

/// Kahn's algorithm; on failure reports one directed cycle.
fn topological_order(n: usize, succ: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    for qs in succ {
        for &q in qs {
            indeg[q] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..n).rev().filter(|&p| indeg[p] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(p) = ready.pop() {
        order.push(p);
        for &q in succ[p].iter().rev() {
            indeg[q] -= 1;
            if indeg[q] == 0 {
                ready.push(q);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every leftover node has a leftover predecessor; walk predecessors until one repeats.
    let mut pred_left = vec![usize::MAX; n];
    for (p, qs) in succ.iter().enumerate() {
        if indeg[p] == 0 {
            continue;
        }
        for &q in qs {
            if indeg[q] > 0 {
                pred_left[q] = p;
            }
        }
    }
    let start = (0..n).find(|&p| indeg[p] > 0).unwrap();
    let mut pos = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut cur = start;
    while pos[cur] == usize::MAX {
        pos[cur] = walk.len();
        walk.push(cur);
        cur = pred_left[cur];
    }
    let mut cycle: Vec<usize> = walk[pos[cur]..].to_vec();
    cycle.reverse();
    Err(Error::Cycle(cycle))
}
