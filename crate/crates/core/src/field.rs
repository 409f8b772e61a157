//! Arithmetic modulo the Mersenne prime `2^61 - 1` and an incremental row
//! echelon basis over it.

pub const PRIME: u64 = (1 << 61) - 1;

#[inline]
fn fold(x: u128) -> u64 {
    let r = (x & PRIME as u128) as u64 + (x >> 61) as u64;
    let r = (r & PRIME) + (r >> 61);
    if r >= PRIME {
        r - PRIME
    } else {
        r
    }
}

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

#[inline]
pub fn neg(a: u64) -> u64 {
    if a == 0 {
        0
    } else {
        PRIME - a
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    fold(a as u128 * b as u128)
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

/// Multiplicative inverse; `a` must be nonzero.
pub fn inv(a: u64) -> u64 {
    debug_assert!(a != 0, "zero has no inverse");
    pow(a, PRIME - 2)
}

/// Rows in echelon form, each normalised to 1 at its own pivot column and
/// zero at the pivots of every earlier row. Reducing a vector against the rows
/// in insertion order therefore clears all pivot columns.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    cols: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl EchelonBasis {
    pub fn new(cols: usize) -> Self {
        EchelonBasis {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn reduce(&self, v: &mut [u64]) {
        for (pivot, row) in &self.rows {
            let f = v[*pivot];
            if f != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *x = sub(*x, mul(f, r));
                    }
                }
            }
        }
    }

    /// True when `v` lies in the row space.
    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` if it is independent of the current rows; reports whether it
    /// was added.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        self.reduce(&mut v);
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = inv(v[pivot]);
        for x in &mut v {
            *x = mul(*x, s);
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Rank of a row list.
pub fn rank(rows: &[Vec<u64>], cols: usize) -> usize {
    let mut basis = EchelonBasis::new(cols);
    for r in rows {
        basis.insert(r.clone());
    }
    basis.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_identities() {
        let a = PRIME - 3;
        let b = 123_456_789_012_345;
        assert_eq!(add(a, 5), 2);
        assert_eq!(sub(2, 5), PRIME - 3);
        assert_eq!(mul(a, inv(a)), 1);
        assert_eq!(mul(b, inv(b)), 1);
        assert_eq!(mul(PRIME - 1, PRIME - 1), 1);
        assert_eq!(add(neg(b), b), 0);
        assert_eq!(pow(2, 61), 1);
    }

    #[test]
    fn echelon_rank() {
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1], vec![1, 3, 4]];
        assert_eq!(rank(&rows, 3), 2);
        let mut basis = EchelonBasis::new(3);
        assert!(basis.insert(vec![0, 1, 1]));
        assert!(basis.contains(&[0, 5, 5]));
        assert!(!basis.contains(&[1, 0, 0]));
        assert!(!basis.insert(vec![0, 0, 0]));
    }
}
