//! The connected minuscule posets, the exceptional coefficient identities on
//! `J(P(E6))` and `J(P(E7))`, and the tCDE checks for minuscule posets and lattices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cde::{certify_tcde, TcdeCertificate};
use crate::error::{Error, Result};
use crate::lattice::IdealLattice;
use crate::poset::Poset;
use crate::rational::Q;
use crate::shapes::{Partition, ShiftedShape};

/// Covers of `P(E6)`, nodes numbered bottom to top as in the standard picture.
const E6_COVERS: [(usize, usize); 20] = [
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (3, 6),
    (4, 7),
    (5, 8),
    (6, 7),
    (7, 8),
    (7, 9),
    (8, 10),
    (9, 10),
    (10, 11),
    (9, 12),
    (10, 13),
    (11, 14),
    (12, 13),
    (13, 14),
    (14, 15),
    (15, 16),
];

const E6_KAPPA: [i64; 16] = [-4, -5, -6, -4, -2, -3, -3, -1, -2, 0, 0, -1, 1, 3, 2, 1];

const E7_COVERS: [(usize, usize); 36] = [
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (5, 6),
    (4, 7),
    (5, 8),
    (6, 9),
    (7, 8),
    (8, 9),
    (8, 10),
    (9, 11),
    (10, 11),
    (11, 12),
    (10, 13),
    (11, 14),
    (12, 15),
    (13, 14),
    (14, 15),
    (15, 16),
    (16, 17),
    (13, 18),
    (14, 19),
    (15, 20),
    (16, 21),
    (17, 22),
    (18, 19),
    (19, 20),
    (20, 21),
    (21, 22),
    (21, 23),
    (22, 24),
    (23, 24),
    (24, 25),
    (25, 26),
    (26, 27),
];

const E7_KAPPA: [i64; 27] = [
    -3, -4, -5, -6, -4, -2, -3, -4, -2, -3, -2, -1, -2, -1, 0, 0, 0, -1, 0, 1, 2, 2, 1, 4, 3, 2, 1,
];

/// A connected minuscule poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum MinusculeCase {
    /// `a x b`.
    ChainProduct {
        a: usize,
        b: usize,
    },
    /// The interval `[empty, b^2]` of Young's lattice.
    TwoRowInterval {
        b: usize,
    },
    /// `P_{a,1,1,a}`.
    DoubleTail {
        a: usize,
    },
    E6,
    E7,
}

impl MinusculeCase {
    pub fn build(&self) -> Result<Poset> {
        match *self {
            MinusculeCase::ChainProduct { a, b } => {
                check_positive(&[a, b])?;
                Ok(Poset::chain(a).direct_product(&Poset::chain(b)))
            }
            MinusculeCase::TwoRowInterval { b } => {
                check_positive(&[b])?;
                Ok(
                    IdealLattice::new(&Poset::chain(2).direct_product(&Poset::chain(b)))?
                        .as_poset()
                        .clone(),
                )
            }
            MinusculeCase::DoubleTail { a } => p_abcd(a, 1, 1, a),
            MinusculeCase::E6 => Ok(exceptional(&E6_COVERS, 16, "e6")),
            MinusculeCase::E7 => Ok(exceptional(&E7_COVERS, 27, "e7")),
        }
    }

    /// A poset `Q` with `J(Q)` isomorphic to this one.
    pub fn ideal_source(&self) -> Result<Poset> {
        match *self {
            MinusculeCase::ChainProduct { a, b } => {
                check_positive(&[a, b])?;
                Ok(Poset::chain(a - 1).disjoint_union(&Poset::chain(b - 1)))
            }
            MinusculeCase::TwoRowInterval { b } => {
                check_positive(&[b])?;
                Ok(Poset::chain(2).direct_product(&Poset::chain(b)))
            }
            MinusculeCase::DoubleTail { a } if a >= 2 => p_abcd(a - 1, 1, 1, a - 1),
            MinusculeCase::DoubleTail { a } => {
                check_positive(&[a])?;
                Ok(Poset::antichain(2))
            }
            MinusculeCase::E6 => Ok(ShiftedShape::new(&Partition::staircase(4))?.poset()),
            MinusculeCase::E7 => MinusculeCase::E6.build(),
        }
    }

    /// Every connected case with parameters up to `max`, plus both exceptional posets.
    pub fn all_up_to(max: usize) -> Vec<MinusculeCase> {
        let mut out = Vec::new();
        for a in 1..=max {
            for b in a..=max {
                out.push(MinusculeCase::ChainProduct { a, b });
            }
        }
        for b in 1..=max {
            out.push(MinusculeCase::TwoRowInterval { b });
        }
        for a in 1..=max.min(3) {
            out.push(MinusculeCase::DoubleTail { a });
        }
        out.push(MinusculeCase::E6);
        out.push(MinusculeCase::E7);
        out
    }
}

impl fmt::Display for MinusculeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinusculeCase::ChainProduct { a, b } => write!(f, "axb:{a}x{b}"),
            MinusculeCase::TwoRowInterval { b } => write!(f, "b2:{b}"),
            MinusculeCase::DoubleTail { a } => write!(f, "pa11a:{a}"),
            MinusculeCase::E6 => write!(f, "E6"),
            MinusculeCase::E7 => write!(f, "E7"),
        }
    }
}

/// Parses the part after `minuscule:`, e.g. `axb:3x4`, `b2:4`, `pa11a:3`, `E6`.
impl FromStr for MinusculeCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<MinusculeCase> {
        let num = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad parameter {x:?} in {s:?}")))
        };
        match s.split_once(':') {
            None if s.eq_ignore_ascii_case("e6") => Ok(MinusculeCase::E6),
            None if s.eq_ignore_ascii_case("e7") => Ok(MinusculeCase::E7),
            Some(("axb", rest)) => {
                let (a, b) = rest
                    .split_once('x')
                    .ok_or_else(|| Error::Parse(format!("expected AxB in {s:?}")))?;
                Ok(MinusculeCase::ChainProduct {
                    a: num(a)?,
                    b: num(b)?,
                })
            }
            Some(("b2", b)) => Ok(MinusculeCase::TwoRowInterval { b: num(b)? }),
            Some(("pa11a", a)) => Ok(MinusculeCase::DoubleTail { a: num(a)? }),
            _ => Err(Error::Parse(format!("unknown minuscule case {s:?}"))),
        }
    }
}

fn check_positive(params: &[usize]) -> Result<()> {
    if params.contains(&0) {
        return Err(Error::InvalidParameters(format!(
            "parameters {params:?} must be positive"
        )));
    }
    Ok(())
}

fn exceptional(covers: &[(usize, usize)], n: usize, tag: &str) -> Poset {
    let rel: Vec<(usize, usize)> = covers.iter().map(|&(p, q)| (p - 1, q - 1)).collect();
    let labels = (1..=n).map(|i| format!("{tag}_{i}")).collect();
    Poset::new(n, &rel)
        .expect("exceptional posets are acyclic")
        .with_labels(labels)
}

/// A chain `w_1 < ... < w_a`, then chains `x_1..x_b` and `y_1..y_c` above `w_a`, then a
/// chain `z_1..z_d` above both `x_b` and `y_c`.
pub fn p_abcd(a: usize, b: usize, c: usize, d: usize) -> Result<Poset> {
    check_positive(&[a, b, c, d])?;
    let w = |i: usize| i - 1;
    let x = |i: usize| a + i - 1;
    let y = |i: usize| a + b + i - 1;
    let z = |i: usize| a + b + c + i - 1;
    let mut rel = Vec::new();
    for i in 1..a {
        rel.push((w(i), w(i + 1)));
    }
    rel.push((w(a), x(1)));
    rel.push((w(a), y(1)));
    for i in 1..b {
        rel.push((x(i), x(i + 1)));
    }
    for i in 1..c {
        rel.push((y(i), y(i + 1)));
    }
    rel.push((x(b), z(1)));
    rel.push((y(c), z(1)));
    for i in 1..d {
        rel.push((z(i), z(i + 1)));
    }
    let mut labels = Vec::new();
    for (tag, len) in [("w", a), ("x", b), ("y", c), ("z", d)] {
        labels.extend((1..=len).map(|i| format!("{tag}_{i}")));
    }
    Ok(Poset::new(a + b + c + d, &rel)?.with_labels(labels))
}

/// Outcome of checking `s * ddeg + sum_p kappa_p (T-_p - T+_p) = t` on every ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub ideals: usize,
    /// Members of the first ideal where the two sides differ.
    pub first_failure: Option<Vec<usize>>,
    /// The constant `t / s` the identity gives for toggle-symmetric expectations.
    #[serde(with = "crate::rational::serde_q")]
    pub c: Q,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// The transcribed coefficients and the scale/total pair of an exceptional identity.
pub fn exceptional_coefficients(case: MinusculeCase) -> Result<(Vec<i64>, i64, i64)> {
    match case {
        MinusculeCase::E6 => Ok((E6_KAPPA.to_vec(), 3, 4)),
        MinusculeCase::E7 => Ok((E7_KAPPA.to_vec(), 2, 3)),
        other => Err(Error::InvalidParameters(format!(
            "{other} has no exceptional identity"
        ))),
    }
}

pub fn check_identity(
    lattice: &IdealLattice,
    kappa: &[i64],
    scale: i64,
    total: i64,
) -> IdentityCheck {
    let failing = (0..lattice.len()).find(|&i| {
        let up: i64 = lattice.upper_covers(i).iter().map(|&(p, _)| kappa[p]).sum();
        let down: i64 = lattice.lower_covers(i).iter().map(|&(p, _)| kappa[p]).sum();
        scale * lattice.ddeg(i) as i64 + down - up != total
    });
    IdentityCheck {
        ideals: lattice.len(),
        first_failure: failing.map(|i| lattice.ideal(i).members()),
        c: Q::new(total.into(), scale.into()),
    }
}

/// Checks the E6 or E7 identity with the transcribed coefficients.
pub fn verify_exceptional(case: MinusculeCase) -> Result<IdentityCheck> {
    let (kappa, scale, total) = exceptional_coefficients(case)?;
    let lattice = IdealLattice::new(&case.build()?)?;
    Ok(check_identity(&lattice, &kappa, scale, total))
}

/// The identity rewritten as `ddeg = t/s + sum_p (kappa_p / s) T_p`.
pub fn exceptional_certificate(case: MinusculeCase) -> Result<TcdeCertificate> {
    let (kappa, scale, total) = exceptional_coefficients(case)?;
    Ok(TcdeCertificate {
        c: Q::new(total.into(), scale.into()),
        kappa: kappa
            .iter()
            .map(|&k| Q::new(k.into(), scale.into()))
            .collect(),
        extra: Vec::new(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinusculeRecord {
    pub case: MinusculeCase,
    pub elements: usize,
    pub ideals: usize,
    /// Certificate constant for `J(P)`.
    #[serde(with = "crate::rational::serde_qopt")]
    pub lattice_c: Option<Q>,
    /// `#P / (r + 2)`.
    #[serde(with = "crate::rational::serde_q")]
    pub rank_density: Q,
    /// Whether `J(Q)` is isomorphic to `P` for the listed source `Q`.
    pub is_ideal_lattice: bool,
    /// Certificate constant for `P` itself, seen as `J(Q)`.
    #[serde(with = "crate::rational::serde_qopt")]
    pub poset_c: Option<Q>,
}

impl MinusculeRecord {
    pub fn ok(&self) -> bool {
        self.lattice_c.as_ref() == Some(&self.rank_density)
            && self.is_ideal_lattice
            && self.poset_c.is_some()
    }
}

pub fn verify_case(case: MinusculeCase, budget: usize) -> Result<MinusculeRecord> {
    let p = case.build()?;
    let rank = p.rank_info();
    let r = rank
        .top_rank
        .filter(|_| rank.is_graded)
        .ok_or(Error::NotGraded)?;
    let lattice = IdealLattice::with_budget(&p, budget)?;
    let source = IdealLattice::with_budget(&case.ideal_source()?, budget)?;
    Ok(MinusculeRecord {
        case,
        elements: p.len(),
        ideals: lattice.len(),
        lattice_c: certify_tcde(&lattice).map(|c| c.c),
        rank_density: Q::new(p.len().into(), (r + 2).into()),
        is_ideal_lattice: source.as_poset().is_isomorphic(&p),
        poset_c: certify_tcde(&source).map(|c| c.c),
    })
}

/// Both minuscule tCDE theorems on every case with parameters up to `max`.
pub fn verify_minuscule_theorems(max: usize, budget: usize) -> Vec<Result<MinusculeRecord>> {
    MinusculeCase::all_up_to(max)
        .into_iter()
        .map(|c| verify_case(c, budget))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DEFAULT_BUDGET;
    use crate::rational::q;

    #[test]
    fn sizes() {
        assert_eq!(MinusculeCase::E6.build().unwrap().len(), 16);
        assert_eq!(MinusculeCase::E7.build().unwrap().len(), 27);
        let p = MinusculeCase::DoubleTail { a: 1 }.build().unwrap();
        assert!(p.is_isomorphic(&Poset::chain(2).direct_product(&Poset::chain(2))));
        let c = MinusculeCase::ChainProduct { a: 1, b: 4 }.build().unwrap();
        assert!(c.is_isomorphic(&Poset::chain(4)));
        assert!(p_abcd(0, 1, 1, 1).is_err());
    }

    #[test]
    fn exceptional_identities() {
        let e6 = verify_exceptional(MinusculeCase::E6).unwrap();
        assert!(e6.holds(), "{:?}", e6.first_failure);
        assert_eq!(e6.c, q(4, 3));
        let e7 = verify_exceptional(MinusculeCase::E7).unwrap();
        assert!(e7.holds(), "{:?}", e7.first_failure);
        assert_eq!(e7.c, q(3, 2));
        let l = IdealLattice::new(&MinusculeCase::E6.build().unwrap()).unwrap();
        assert!(exceptional_certificate(MinusculeCase::E6)
            .unwrap()
            .verify(&l));
    }

    #[test]
    fn zeroed_coefficient_breaks_identity() {
        let (mut kappa, s, t) = exceptional_coefficients(MinusculeCase::E6).unwrap();
        kappa[0] = 0;
        let l = IdealLattice::new(&MinusculeCase::E6.build().unwrap()).unwrap();
        assert!(!check_identity(&l, &kappa, s, t).holds());
    }

    #[test]
    fn identifications() {
        let e6 = MinusculeCase::E6.build().unwrap();
        let j = IdealLattice::new(&e6).unwrap();
        assert_eq!(j.len(), 27);
        assert!(j
            .as_poset()
            .is_isomorphic(&MinusculeCase::E7.build().unwrap()));
        let interval = MinusculeCase::TwoRowInterval { b: 3 }.build().unwrap();
        let staircase = ShiftedShape::new(&Partition::staircase(4)).unwrap().poset();
        assert!(interval.is_isomorphic(&staircase));
    }

    #[test]
    fn small_cases_certify() {
        for case in MinusculeCase::all_up_to(2) {
            let rec = verify_case(case, DEFAULT_BUDGET).unwrap();
            assert!(rec.ok(), "{rec:?}");
        }
    }

    #[test]
    fn literals() {
        assert_eq!(
            "axb:3x4".parse::<MinusculeCase>().unwrap(),
            MinusculeCase::ChainProduct { a: 3, b: 4 }
        );
        assert_eq!("E6".parse::<MinusculeCase>().unwrap(), MinusculeCase::E6);
        assert_eq!(
            "pa11a:3".parse::<MinusculeCase>().unwrap().to_string(),
            "pa11a:3"
        );
        assert!("b3:2".parse::<MinusculeCase>().is_err());
    }
}
