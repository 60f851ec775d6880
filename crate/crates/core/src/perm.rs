//! Permutations of `{1..n}`.
//!
//! Points are 1-based at the public boundary ([`Permutation::apply`],
//! cycles, text forms) and 0-based internally ([`Permutation::apply0`]).
//! `compose(σ, ρ)` is `σ ∘ ρ`, i.e. `ρ` is applied first.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// From the 1-based image list `σ(1) … σ(n)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 1..{n}"
                )));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|x| x - 1).collect(),
        })
    }

    pub(crate) fn from_images0(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i == x)
        });
        Permutation { images }
    }

    /// From disjoint 1-based cycles; unlisted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n || seen[x - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "cycles {cycles:?} are not disjoint cycles on 1..{n}"
                    )));
                }
                seen[x - 1] = true;
                images[x - 1] = cycle[(k + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses either an image list (`2 1 4 3`) or cycle notation
    /// (`(1 2)(3 4)`, `()` for the identity); cycle notation needs `n`.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('(') {
            let n = n.ok_or_else(|| {
                Error::InvalidPermutation("cycle notation needs the size n".into())
            })?;
            let mut cycles = Vec::new();
            for chunk in text.split(')') {
                let chunk = chunk.trim();
                if chunk.is_empty() {
                    continue;
                }
                let body = chunk.strip_prefix('(').ok_or_else(|| {
                    Error::InvalidPermutation(format!("malformed cycle notation `{text}`"))
                })?;
                let cycle = parse_points(body)?;
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
            }
            Self::from_cycles(n, &cycles)
        } else {
            let images = parse_points(text)?;
            if let Some(n) = n {
                if n != images.len() {
                    return Err(Error::SizeMismatch {
                        left: n,
                        right: images.len(),
                    });
                }
            }
            Self::from_images(&images)
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `σ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    /// `σ(i)` for 0-based `i`.
    pub fn apply0(&self, i: usize) -> usize {
        self.images[i]
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    fn check_size(&self, other: &Permutation) -> Result<()> {
        if self.n() == other.n() {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            })
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_size(other)?;
        Ok(Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn power(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let k = k.unsigned_abs();
        let images = (0..self.n())
            .map(|i| {
                let cycle_len = base.cycle_length0(i) as u64;
                let mut x = i;
                for _ in 0..(k % cycle_len) {
                    x = base.images[x];
                }
                x
            })
            .collect();
        Permutation { images }
    }

    fn cycle_length0(&self, i: usize) -> usize {
        let mut len = 1;
        let mut x = self.images[i];
        while x != i {
            x = self.images[x];
            len += 1;
        }
        len
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn is_involution(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| self.images[x] == i)
    }

    /// Cycles with 1-based points, each starting at its minimum, ordered by
    /// minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles0()
            .into_iter()
            .map(|c| c.into_iter().map(|x| x + 1).collect())
            .collect()
    }

    pub(crate) fn cycles0(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles0()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// True iff `τ σ τ⁻¹ = σ⁻¹` with `τ = self`.
    pub fn is_reverser(&self, sigma: &Permutation) -> Result<bool> {
        self.check_size(sigma)?;
        Ok((0..self.n()).all(|i| {
            // τστ⁻¹(τ(i)) = τ(σ(i)) must equal σ⁻¹(τ(i)), i.e. σ(τ(σ(i))) = τ(i)
            sigma.images[self.images[sigma.images[i]]] == self.images[i]
        }))
    }

    /// An involution `τ` with `τ σ τ = σ⁻¹`: on each cycle `(c_0 … c_{m-1})`
    /// it sends `c_j` to `c_{-j mod m}`.
    pub fn reversing_involution(&self) -> Permutation {
        let mut images: Vec<usize> = (0..self.n()).collect();
        for cycle in self.cycles0() {
            let m = cycle.len();
            for j in 0..m {
                images[cycle[j]] = cycle[(m - j) % m];
            }
        }
        Permutation { images }
    }

    /// All involutions reversing `self`, in lexicographic order of their
    /// image lists.
    pub fn reversing_involutions(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut images = vec![usize::MAX; self.n()];
        self.search_reversers(0, &mut images, &mut out);
        out.sort_by(|a, b| a.images.cmp(&b.images));
        debug_assert!(out.iter().all(|t| t.is_involution() && t.is_reverser(self).unwrap()));
        out
    }

    fn search_reversers(&self, i: usize, images: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        let n = self.n();
        if i == n {
            out.push(Permutation {
                images: images.clone(),
            });
            return;
        }
        if images[i] != usize::MAX {
            return self.search_reversers(i + 1, images, out);
        }
        for j in i..n {
            if images[j] != usize::MAX {
                continue;
            }
            // A reversing involution is determined on a σ-cycle by one image:
            // τ(σ^k(i)) = σ^{-k}(τ(i)). Propagate and check consistency.
            let snapshot = images.clone();
            if self.propagate(i, j, images) {
                self.search_reversers(i + 1, images, out);
            }
            *images = snapshot;
        }
    }

    fn propagate(&self, i: usize, j: usize, images: &mut [usize]) -> bool {
        let inv = self.inverse();
        let (mut x, mut y) = (i, j);
        loop {
            for (a, b) in [(x, y), (y, x)] {
                if images[a] == usize::MAX {
                    images[a] = b;
                } else if images[a] != b {
                    return false;
                }
            }
            x = self.images[x];
            y = inv.images[y];
            if x == i {
                return y == j;
            }
        }
    }

    /// Cycle notation, fixed points omitted; `()` for the identity.
    pub fn cycle_string(&self) -> String {
        let parts: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let pts: Vec<String> = c.iter().map(ToString::to_string).collect();
                format!("({})", pts.join(" "))
            })
            .collect();
        if parts.is_empty() {
            "()".into()
        } else {
            parts.concat()
        }
    }
}

fn parse_points(text: &str) -> Result<Vec<usize>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidPermutation(format!("`{s}` is not a point")))
        })
        .collect()
}

/// Canonical one-line image list.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images().iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_string())
    }
}
