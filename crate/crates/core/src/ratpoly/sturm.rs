//! Sturm chains over the rationals.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::poly::{from_integers, primitive, primitive_integers, pseudo_remainder, Poly};
use super::rational::Rational;
use crate::error::{QesError, Result};

/// A point of the extended real line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Bound {
    fn rank(&self) -> u8 {
        match self {
            Bound::NegInf => 0,
            Bound::Finite(_) => 1,
            Bound::PosInf => 2,
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        })
    }
}

impl From<Rational> for Bound {
    fn from(x: Rational) -> Self {
        Bound::Finite(x)
    }
}

/// Sturm chain of the squarefree part of a polynomial.
///
/// Elements are kept as primitive integer polynomials; each differs from the
/// classical rational chain by a positive factor, which leaves sign patterns
/// intact.
#[derive(Clone, Debug)]
pub struct SturmChain {
    head: Poly,
    chain: Vec<Poly>,
}

impl SturmChain {
    pub fn new(p: &Poly) -> Result<Self> {
        if p.is_zero() {
            return Err(QesError::ZeroPolynomial);
        }
        let chain = integer_chain(p);
        let last = chain.last().expect("chain starts with p");
        if last.len() <= 1 {
            return Ok(SturmChain {
                head: p.monic(),
                chain: chain.into_iter().map(from_integers).collect(),
            });
        }
        // the final remainder is gcd(p, p') up to a constant
        let (sf, _) = p.div_rem(&from_integers(last.clone()))?;
        let chain = integer_chain(&sf);
        Ok(SturmChain {
            head: sf.monic(),
            chain: chain.into_iter().map(from_integers).collect(),
        })
    }

    /// The squarefree polynomial heading the chain.
    pub fn head(&self) -> &Poly {
        &self.head
    }

    pub fn sign_changes(&self, at: &Bound) -> usize {
        let signs = self.chain.iter().filter_map(|q| {
            let s = match at {
                Bound::Finite(x) => sign_of(&q.eval(x)),
                Bound::PosInf => sign_of(q.leading()?),
                Bound::NegInf => {
                    let s = sign_of(q.leading()?);
                    if q.degree()? % 2 == 1 {
                        -s
                    } else {
                        s
                    }
                }
            };
            (s != 0).then_some(s)
        });
        let mut changes = 0;
        let mut last = 0i8;
        for s in signs {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Bound, hi: &Bound) -> Result<usize> {
        if lo >= hi {
            return Err(QesError::InvalidInterval("require lo < hi".into()));
        }
        Ok(self.sign_changes(lo).saturating_sub(self.sign_changes(hi)))
    }

    pub fn count_all(&self) -> usize {
        self.sign_changes(&Bound::NegInf) - self.sign_changes(&Bound::PosInf)
    }
}

fn sign_of(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// `p, p', -rem, ...` as primitive integer polynomials, down to the last
/// nonzero remainder.
fn integer_chain(p: &Poly) -> Vec<Vec<BigInt>> {
    let mut chain = vec![primitive_integers(p)];
    let mut cur = primitive_integers(&p.derivative());
    while !cur.is_empty() {
        let prev = chain.last().expect("nonempty chain");
        let (mut r, times) = pseudo_remainder(prev, &cur);
        // -rem is -r / lc^times; keep only the sign of that factor
        let flip = cur.last().expect("nonzero").is_negative() && times % 2 == 1;
        if !flip {
            for c in r.iter_mut() {
                *c = -&*c;
            }
        }
        chain.push(cur);
        cur = primitive(r);
    }
    chain
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_count(p: &Poly, lo: &Bound, hi: &Bound) -> Result<usize> {
    SturmChain::new(p)?.count(lo, hi)
}
