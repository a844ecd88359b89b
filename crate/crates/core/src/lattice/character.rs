//! Characters of split tori, character modules and their kernel subgroups.

use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize, Serializer};

use super::snf::{smith_normal_form, SmithForm};
use crate::arith::IntMatrix;
use crate::error::{Error, Result};

/// `χ_l = Π x_i^{l_i}` on `G_m^l`, identified with its exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(pub Vec<i64>);

impl Character {
    pub fn new(exponents: Vec<i64>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::invalid("character of a zero-dimensional torus"));
        }
        Ok(Character(exponents))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `Σ |l_i|`.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|v| v.unsigned_abs()).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    /// Errors on the trivial character.
    pub fn require_nonzero(&self) -> Result<&Self> {
        if self.is_trivial() {
            Err(Error::invalid("nonzero character required"))
        } else {
            Ok(self)
        }
    }

    pub fn gcd(&self) -> u64 {
        self.0.iter().fold(0u64, |g, &v| num_integer::gcd(g, v.unsigned_abs()))
    }
}

/// Submodule of `ℤ^l` generated by characters, with a lazily cached SNF.
#[derive(Clone, Debug, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>")]
pub struct CharacterModule {
    ambient_dim: usize,
    generators: IntMatrix,
    #[serde(skip)]
    snf: OnceLock<SmithForm>,
}

impl PartialEq for CharacterModule {
    fn eq(&self, o: &Self) -> bool {
        self.ambient_dim == o.ambient_dim && self.generators == o.generators
    }
}

impl TryFrom<Vec<Vec<i64>>> for CharacterModule {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        let l = rows.first().map(|r| r.len()).ok_or_else(|| {
            Error::invalid("cannot infer ambient dimension of an empty module")
        })?;
        let chars = rows.into_iter().map(Character).collect::<Vec<_>>();
        CharacterModule::new(l, chars)
    }
}

impl Serialize for CharacterModule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.generators.serialize(s)
    }
}

impl CharacterModule {
    pub fn new(ambient_dim: usize, generators: Vec<Character>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::invalid("ambient dimension must be at least 1"));
        }
        if let Some(c) = generators.iter().find(|c| c.dim() != ambient_dim) {
            return Err(Error::DimensionMismatch { expected: ambient_dim, found: c.dim() });
        }
        let rows: Vec<Vec<i64>> = generators.into_iter().map(|c| c.0).collect();
        let generators = if rows.is_empty() {
            IntMatrix::zeros(0, ambient_dim)
        } else {
            IntMatrix::from_i64_rows(&rows)?
        };
        Ok(CharacterModule { ambient_dim, generators, snf: OnceLock::new() })
    }

    pub fn from_matrix(ambient_dim: usize, generators: IntMatrix) -> Result<Self> {
        if generators.rows() > 0 && generators.cols() != ambient_dim {
            return Err(Error::DimensionMismatch { expected: ambient_dim, found: generators.cols() });
        }
        let generators =
            if generators.rows() == 0 { IntMatrix::zeros(0, ambient_dim) } else { generators };
        Ok(CharacterModule { ambient_dim, generators, snf: OnceLock::new() })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        CharacterModule {
            ambient_dim,
            generators: IntMatrix::zeros(0, ambient_dim),
            snf: OnceLock::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn snf(&self) -> &SmithForm {
        self.snf.get_or_init(|| {
            if self.generators.rows() == 0 {
                let l = self.ambient_dim;
                SmithForm {
                    u: IntMatrix::zeros(0, 0),
                    s: IntMatrix::zeros(0, l),
                    v: IntMatrix::identity(l),
                    v_inv: IntMatrix::identity(l),
                    rank: 0,
                }
            } else {
                smith_normal_form(&self.generators)
            }
        })
    }

    pub fn rank(&self) -> usize {
        self.snf().rank
    }

    /// The module generated by both generator sets.
    pub fn sum(&self, other: &CharacterModule) -> Result<CharacterModule> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        CharacterModule::from_matrix(self.ambient_dim, self.generators.vstack(&other.generators)?)
    }

    /// Saturation `(ℚN) ∩ ℤ^l`.
    pub fn saturation(&self) -> CharacterModule {
        CharacterModule::from_matrix(self.ambient_dim, self.snf().saturated_basis())
            .expect("saturated basis has ambient width")
    }

    pub fn is_saturated(&self) -> bool {
        self.snf().torsion().is_empty()
    }
}

/// `H_N = ⋂_{χ ∈ N} ker χ`, described by its saturated annihilator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubgroupDescriptor {
    pub ambient_dim: usize,
    pub annihilator: CharacterModule,
    pub dim: usize,
    /// Invariant factors > 1 of the original module: `H_N` has
    /// `Π torsion` connected components, each a translate of the subtorus.
    #[serde(serialize_with = "crate::arith::intmat::ser_bigint_vec")]
    pub torsion: Vec<BigInt>,
}

impl SubgroupDescriptor {
    pub fn component_count(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn whole_torus(ambient_dim: usize) -> Self {
        SubgroupDescriptor {
            ambient_dim,
            annihilator: CharacterModule::zero(ambient_dim),
            dim: ambient_dim,
            torsion: Vec::new(),
        }
    }
}

pub fn kernel_subgroup(n: &CharacterModule) -> SubgroupDescriptor {
    let snf = n.snf();
    SubgroupDescriptor {
        ambient_dim: n.ambient_dim(),
        annihilator: n.saturation(),
        dim: n.ambient_dim() - snf.rank,
        torsion: snf.torsion(),
    }
}

/// Kernel of the characters given as raw exponent rows.
pub fn kernel_of(ambient_dim: usize, chars: &[Character]) -> Result<SubgroupDescriptor> {
    Ok(kernel_subgroup(&CharacterModule::new(ambient_dim, chars.to_vec())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(v: &[i64]) -> Character {
        Character(v.to_vec())
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel_of(3, &[ch(&[1, 1, 1])]).unwrap().dim, 2);
        assert_eq!(kernel_of(2, &[ch(&[1, 0]), ch(&[0, 1])]).unwrap().dim, 0);
        let h = kernel_of(2, &[ch(&[2, -2])]).unwrap();
        assert_eq!(h.dim, 1);
        assert_eq!(h.torsion, vec![BigInt::from(2)]);
        assert!(h.annihilator.is_saturated());
        assert_eq!(kernel_of(4, &[]).unwrap().dim, 4);
    }

    #[test]
    fn mixed_lengths_rejected() {
        let r = kernel_of(2, &[ch(&[1, 0]), ch(&[1, 0, 0])]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn degree_and_json() {
        assert_eq!(ch(&[2, -3, 0]).degree(), 5);
        let m = CharacterModule::new(2, vec![ch(&[2, -2])]).unwrap();
        let h = kernel_subgroup(&m);
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"ambient_dim":2,"annihilator":[[1,-1]],"dim":1,"torsion":[2]}"#);
        let back: CharacterModule = serde_json::from_str("[[2,-2]]").unwrap();
        assert_eq!(back, m);
    }
}
