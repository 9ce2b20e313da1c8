//! Elements of the symmetric group `S_n`.
//!
//! A [`Permutation`] stores its image with 1-based values: `image[i - 1] = σ(i)`.
//! Composition follows the usual convention `(σ ∘ ν)(i) = σ(ν(i))`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Largest `n` that [`enumerate`] accepts unless a different limit is passed.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 8;

/// A bijection on `{1, ..., n}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from its 1-based image, checking bijectivity.
    pub fn new(image: Vec<u32>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::EmptyRanking);
        }
        let mut seen = vec![false; n];
        for &v in &image {
            let v = v as usize;
            if v == 0 || v > n {
                return Err(Error::NotBijection {
                    n,
                    reason: format!("value {v} out of range"),
                });
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::NotBijection {
                    n,
                    reason: format!("value {v} repeated"),
                });
            }
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRanking);
        }
        Ok(Self {
            image: (1..=n as u32).collect(),
        })
    }

    /// The order-reversing permutation `i ↦ n - i + 1`.
    pub fn reversal(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRanking);
        }
        Ok(Self {
            image: (1..=n as u32).rev().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    /// Always false; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// The 1-based image `(σ(1), ..., σ(n))`.
    pub fn as_slice(&self) -> &[u32] {
        &self.image
    }

    /// `σ(i)` for a 1-based position `i`.
    pub fn apply(&self, i: usize) -> Result<u32> {
        if i == 0 || i > self.len() {
            return Err(Error::IndexOutOfRange { index: i, n: self.len() });
        }
        Ok(self.image[i - 1])
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        check_same_len(self.len(), other.len())?;
        Ok(Permutation {
            image: other
                .image
                .iter()
                .map(|&v| self.image[v as usize - 1])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0u32; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v as usize - 1] = i as u32 + 1;
        }
        Permutation { image }
    }

    /// The prefix `(σ(1), ..., σ(k))`. Values may exceed `k`.
    pub fn restrict(&self, k: usize) -> Result<&[u32]> {
        if k == 0 || k > self.len() {
            return Err(Error::PrefixOutOfRange { k, n: self.len() });
        }
        Ok(&self.image[..k])
    }

    /// `self ∘ (i j)`: exchanges the entries at positions `i` and `j`.
    pub fn swap_positions(&self, spec: SwapSpec) -> Result<Permutation> {
        spec.check(self.len())?;
        let mut image = self.image.clone();
        image.swap(spec.i - 1, spec.j - 1);
        Ok(Permutation { image })
    }

    /// `(i j) ∘ self`: exchanges the values `i` and `j` wherever they occur.
    pub fn swap_values(&self, spec: SwapSpec) -> Result<Permutation> {
        spec.check(self.len())?;
        let (a, b) = (spec.i as u32, spec.j as u32);
        let image = self
            .image
            .iter()
            .map(|&v| match v {
                v if v == a => b,
                v if v == b => a,
                v => v,
            })
            .collect();
        Ok(Permutation { image })
    }
}

pub(crate) fn check_same_len(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.image.iter().join(","))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses the comma-separated 1-based image, e.g. `"2,1,3"`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason: String| Error::Parse {
            input: s.to_string(),
            reason,
        };
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(parse_err("empty input".into()));
        }
        let image = trimmed
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|e| parse_err(format!("{:?}: {e}", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(image).map_err(|e| parse_err(e.to_string()))
    }
}

/// A transposition `(i j)` on 1-based positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SwapSpec {
    pub i: usize,
    pub j: usize,
}

impl SwapSpec {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::DegenerateSwap(i));
        }
        Ok(Self { i, j })
    }

    pub fn width(&self) -> usize {
        self.i.abs_diff(self.j)
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.i == self.j {
            return Err(Error::DegenerateSwap(self.i));
        }
        for index in [self.i, self.j] {
            if index == 0 || index > n {
                return Err(Error::IndexOutOfRange { index, n });
            }
        }
        Ok(())
    }

    /// All swaps `(i j)` with `i < j` in `S_n` of the given width.
    pub fn all_of_width(n: usize, width: usize) -> impl Iterator<Item = SwapSpec> {
        (1..=n.saturating_sub(width))
            .filter(move |_| width > 0)
            .map(move |i| SwapSpec { i, j: i + width })
    }
}

/// The transposition `(i j)` as an element of `S_n`.
pub fn swap(n: usize, spec: SwapSpec) -> Result<Permutation> {
    Permutation::identity(n)?.swap_positions(spec)
}

/// Draw `index` of the uniform stream keyed by `seed`.
pub fn sample_one(n: usize, seed: u64, index: u64) -> Result<Permutation> {
    let mut p = Permutation::identity(n)?;
    p.image.shuffle(&mut stream_rng(seed, index));
    Ok(p)
}

/// `count` i.i.d. uniform permutations of `S_n`; element `d` depends only on
/// `(seed, d)`.
pub fn sample_uniform(n: usize, count: usize, seed: u64) -> Result<Vec<Permutation>> {
    if n == 0 {
        return Err(Error::EmptyRanking);
    }
    (0..count as u64)
        .into_par_iter()
        .map(|d| sample_one(n, seed, d))
        .collect()
}

/// All `n!` permutations in lexicographic order, with the default size limit.
pub fn enumerate(n: usize) -> Result<Vec<Permutation>> {
    enumerate_with_limit(n, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn enumerate_with_limit(n: usize, limit: usize) -> Result<Vec<Permutation>> {
    if n == 0 {
        return Err(Error::EmptyRanking);
    }
    if n > limit {
        return Err(Error::ExhaustiveLimit { n, limit });
    }
    Ok((1..=n as u32)
        .permutations(n)
        .map(|image| Permutation { image })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn identity_examples() {
        assert_eq!(Permutation::identity(3).unwrap(), p("1,2,3"));
        assert_eq!(Permutation::identity(1).unwrap(), p("1"));
        assert_eq!(Permutation::identity(0), Err(Error::EmptyRanking));
    }

    #[test]
    fn compose_examples() {
        assert_eq!(p("2,1,3").compose(&p("1,3,2")).unwrap(), p("2,3,1"));
        assert_eq!(p("2,1").compose(&p("2,1")).unwrap(), p("1,2"));
        let sigma = p("3,1,4,5,2");
        let id = Permutation::identity(5).unwrap();
        assert_eq!(id.compose(&sigma).unwrap(), sigma);
        assert_eq!(sigma.compose(&id).unwrap(), sigma);
        assert!(matches!(
            sigma.compose(&p("1,2")),
            Err(Error::DimensionMismatch { left: 5, right: 2 })
        ));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p("2,3,1").inverse(), p("3,1,2"));
        assert_eq!(p("2,1,3").inverse(), p("2,1,3"));
        assert!(Permutation::identity(6).unwrap().inverse().is_identity());
    }

    #[test]
    fn swap_examples() {
        assert_eq!(swap(4, SwapSpec::new(1, 2).unwrap()).unwrap(), p("2,1,3,4"));
        assert_eq!(
            swap(10, SwapSpec::new(3, 4).unwrap()).unwrap(),
            p("1,2,4,3,5,6,7,8,9,10")
        );
        assert_eq!(SwapSpec::new(2, 4).unwrap().width(), 2);
        assert_eq!(SwapSpec::new(3, 3), Err(Error::DegenerateSwap(3)));
        assert!(matches!(
            swap(4, SwapSpec::new(2, 5).unwrap()),
            Err(Error::IndexOutOfRange { index: 5, n: 4 })
        ));
    }

    #[test]
    fn left_and_right_swaps_differ() {
        let sigma = p("3,1,2");
        let s = SwapSpec::new(1, 2).unwrap();
        let t = swap(3, s).unwrap();
        assert_eq!(sigma.swap_positions(s).unwrap(), sigma.compose(&t).unwrap());
        assert_eq!(sigma.swap_values(s).unwrap(), t.compose(&sigma).unwrap());
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(p("2,1,3,4,5").restrict(2).unwrap(), &[2, 1]);
        assert_eq!(p("5,4,3,2,1").restrict(2).unwrap(), &[5, 4]);
        assert_eq!(p("5,4,3,2,1").restrict(5).unwrap(), &[5, 4, 3, 2, 1]);
        assert!(p("1,2").restrict(3).is_err());
        assert!(p("1,2").restrict(0).is_err());
    }

    #[test]
    fn parse_rejects_non_bijections() {
        assert!("1,1,2".parse::<Permutation>().is_err());
        assert!("0,1".parse::<Permutation>().is_err());
        assert!("1,x".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert_eq!(" 2, 1 ,3".parse::<Permutation>().unwrap(), p("2,1,3"));
        assert_eq!(p("2,1,3").to_string(), "2,1,3");
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate(3).unwrap().len(), 6);
        assert_eq!(enumerate(1).unwrap(), vec![p("1")]);
        let all = enumerate(7).unwrap();
        assert_eq!(all.len(), 5040);
        let unique: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(unique.len(), 5040);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate(9), Err(Error::ExhaustiveLimit { n: 9, limit: 8 }));
        assert_eq!(enumerate_with_limit(9, 9).map(|v| v.len()).ok(), Some(362880));
    }

    #[test]
    fn group_laws_on_s4() {
        let all = enumerate(4).unwrap();
        let id = Permutation::identity(4).unwrap();
        for a in &all {
            assert_eq!(a.inverse().compose(a).unwrap(), id);
            assert_eq!(a.compose(&a.inverse()).unwrap(), id);
            for b in &all {
                let ab = a.compose(b).unwrap();
                for c in &all {
                    assert_eq!(ab.compose(c).unwrap(), a.compose(&b.compose(c).unwrap()).unwrap());
                }
            }
        }
        let commuting = all
            .iter()
            .all(|a| all.iter().all(|b| a.compose(b).unwrap() == b.compose(a).unwrap()));
        assert!(!commuting);
    }

    #[test]
    fn sampling_is_reproducible() {
        assert!(sample_uniform(5, 0, 1).unwrap().is_empty());
        let a = sample_uniform(100, 50, 9).unwrap();
        let b = sample_uniform(100, 50, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[17], sample_one(100, 9, 17).unwrap());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        assert_eq!(pool.install(|| sample_uniform(100, 50, 9).unwrap()), a);
    }

    #[test]
    fn sampling_marginals_are_uniform() {
        let n = 5;
        let draws = sample_uniform(n, 100_000, 2024).unwrap();
        let mut counts = vec![vec![0usize; n]; n];
        for d in &draws {
            for (pos, &v) in d.as_slice().iter().enumerate() {
                counts[pos][v as usize - 1] += 1;
            }
        }
        for row in &counts {
            for &c in row {
                let freq = c as f64 / draws.len() as f64;
                assert!((freq - 0.2).abs() < 0.01, "frequency {freq}");
            }
        }
    }
}
