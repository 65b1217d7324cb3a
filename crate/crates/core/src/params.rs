//! The parameter tuple `(n, h, r)` with its divisibility invariants, and the
//! derived color count `k = C(n-1, h-1) / r`.

use crate::binom::binom;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Params {
    pub n: u32,
    pub h: u32,
    pub r: u64,
}

impl Params {
    /// Validates `1 <= h <= n`, `h | rn` and `r | C(n-1, h-1)`.
    pub fn new(n: u32, h: u32, r: u64) -> Result<Params> {
        if n == 0 || h == 0 || r == 0 || h > n {
            return Err(Error::InvalidParameters(format!(
                "params n={n} h={h} r={r} must be positive with h <= n"
            )));
        }
        let p = Params { n, h, r };
        if (r * n as u64) % h as u64 != 0 {
            return Err(Error::InvalidParameters(format!(
                "h={h} does not divide r*n={}",
                r * n as u64
            )));
        }
        if p.per_vertex_total() % r != 0 {
            return Err(Error::InvalidParameters(format!(
                "r={r} does not divide C(n-1, h-1)={}",
                p.per_vertex_total()
            )));
        }
        Ok(p)
    }

    /// `C(n-1, h-1)`: the number of host edges through any fixed vertex.
    pub fn per_vertex_total(&self) -> u64 {
        binom(self.n as u64 - 1, self.h as u64 - 1)
    }

    /// Number of color classes.
    pub fn k(&self) -> u64 {
        self.per_vertex_total() / self.r
    }

    /// Edges per class in a full r-factorization: `rn / h`.
    pub fn class_size(&self) -> u64 {
        self.r * self.n as u64 / self.h as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_parameters() {
        let p = Params::new(6, 3, 1).unwrap();
        assert_eq!(p.k(), 10);
        assert_eq!(p.class_size(), 2);

        let p = Params::new(9, 3, 4).unwrap();
        assert_eq!(p.k(), 7);
        assert_eq!(p.class_size(), 12);
    }

    #[test]
    fn divisibility_rejections() {
        assert!(Params::new(8, 3, 1).is_err()); // 3 does not divide 8
        assert!(Params::new(9, 3, 5).is_err()); // 5 does not divide 28
        assert!(Params::new(5, 6, 1).is_err()); // h > n
    }
}
