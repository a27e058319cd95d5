//! Bit-level encodings of bipartitions and generalized GHZ indices.
//!
//! Both `k` and `j` pack one bit per qubit `i = 2..N` with weight
//! `2^(i-2)`; qubit 1 carries the implicit bit 0. Dense matrices use the
//! usual Kronecker ordering instead, where qubit `i` is bit `N - i` of the
//! computational-basis index (qubit 1 is the most significant bit).

use std::fmt;

use crate::error::{Error, Result};
use crate::polarization::MAX_QUBITS;

/// Bit of the computational-basis index that holds qubit `qubit` (1-based).
#[inline]
pub fn basis_bit(n: usize, qubit: usize) -> usize {
    1 << (n - qubit)
}

fn check_qubit_count(n: usize) -> Result<()> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(Error::QubitCount {
            n,
            min: 2,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Map a packed `i = 2..N` bit string to the basis bits of qubits 2..N.
#[inline]
fn spread_to_basis(n: usize, packed: u32) -> usize {
    let mut out = 0usize;
    for i in 2..=n {
        if (packed >> (i - 2)) & 1 == 1 {
            out |= basis_bit(n, i);
        }
    }
    out
}

/// A split of N qubits into party A (always holding qubit 1) and party B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n: usize,
    k: u32,
}

impl Bipartition {
    pub fn new(n: usize, k: u64) -> Result<Self> {
        check_qubit_count(n)?;
        let max = Self::max_k(n);
        if k == 0 || k > u64::from(max) {
            return Err(Error::BipartitionOutOfRange {
                n,
                k,
                max: u64::from(max),
            });
        }
        Ok(Self { n, k: k as u32 })
    }

    /// Bipartition whose party B is exactly `qubits` (1-based labels).
    pub fn from_party_b(n: usize, qubits: &[usize]) -> Result<Self> {
        check_qubit_count(n)?;
        let mut k = 0u64;
        for &q in qubits {
            if q < 2 || q > n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
            k |= 1 << (q - 2);
        }
        Self::new(n, k)
    }

    /// Party A = qubits 1..N-w, party B = the last `w` qubits.
    pub fn last_qubits(n: usize, w: usize) -> Result<Self> {
        check_qubit_count(n)?;
        if w == 0 || w >= n {
            return Err(Error::InvalidParameter(format!(
                "party B size w = {w} outside [1, {}]",
                n - 1
            )));
        }
        let qubits: Vec<usize> = (n - w + 1..=n).collect();
        Self::from_party_b(n, &qubits)
    }

    /// Largest valid `k`, `2^(N-1) - 1`.
    pub fn max_k(n: usize) -> u32 {
        ((1u64 << (n - 1)) - 1) as u32
    }

    /// Every bipartition of `n` qubits in increasing `k`.
    pub fn all(n: usize) -> Result<impl Iterator<Item = Bipartition>> {
        check_qubit_count(n)?;
        Ok((1..=Self::max_k(n)).map(move |k| Bipartition { n, k }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Size of party B (Hamming weight of `k`).
    pub fn w(&self) -> usize {
        self.k.count_ones() as usize
    }

    /// `k_i` for qubit `qubit`; `k_1` is always 0.
    pub fn bit(&self, qubit: usize) -> u8 {
        if qubit < 2 {
            0
        } else {
            ((self.k >> (qubit - 2)) & 1) as u8
        }
    }

    pub fn in_party_b(&self, qubit: usize) -> bool {
        self.bit(qubit) == 1
    }

    pub fn party_a(&self) -> Vec<usize> {
        (1..=self.n).filter(|&q| !self.in_party_b(q)).collect()
    }

    pub fn party_b(&self) -> Vec<usize> {
        (1..=self.n).filter(|&q| self.in_party_b(q)).collect()
    }

    /// Mask of party-B bits in the computational-basis index.
    pub fn basis_mask(&self) -> usize {
        spread_to_basis(self.n, self.k)
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: Vec<usize>| {
            v.iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "k={} A={{{}}} B={{{}}}",
            self.k,
            list(self.party_a()),
            list(self.party_b())
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Label `j` of the generalized GHZ pair `|Psi_j^(+/-)> = (|0 j> +/- |1 jbar>)/sqrt 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GhzIndex {
    n: usize,
    j: u32,
}

impl GhzIndex {
    pub fn new(n: usize, j: u64) -> Result<Self> {
        check_qubit_count(n)?;
        let max = u64::from(Bipartition::max_k(n));
        if j > max {
            return Err(Error::GhzIndexOutOfRange { n, j, max });
        }
        Ok(Self { n, j: j as u32 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// `j_i` for qubit `qubit`; `j_1 := 0`.
    pub fn bit(&self, qubit: usize) -> u8 {
        if qubit < 2 {
            0
        } else {
            ((self.j >> (qubit - 2)) & 1) as u8
        }
    }

    /// Bit flip `jbar = 2^(N-1) - 1 - j`.
    pub fn bar(&self) -> Self {
        Self {
            n: self.n,
            j: Bipartition::max_k(self.n) - self.j,
        }
    }

    /// `j (+) k`: flip every bit belonging to party B.
    pub fn xor(&self, bip: &Bipartition) -> Self {
        Self {
            n: self.n,
            j: self.j ^ bip.k(),
        }
    }

    /// Basis index of `|0 j>`.
    pub fn zero_branch(&self) -> usize {
        spread_to_basis(self.n, self.j)
    }

    /// Basis index of `|1 jbar>`.
    pub fn one_branch(&self) -> usize {
        basis_bit(self.n, 1) | spread_to_basis(self.n, self.bar().j)
    }
}
