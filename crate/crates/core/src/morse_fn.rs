//! Combinatorial Morse functions with exact rational values.

use num_rational::Rational64;

use crate::complex::{CellId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::DiscreteVectorField;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseFunction {
    values: Vec<Rational64>,
}

/// A cell where the Morse condition fails, with its exceptional incidences:
/// cofaces with value `<=` and faces with value `>=` its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseViolation {
    pub cell: CellId,
    pub exceptional_cofaces: Vec<CellId>,
    pub exceptional_faces: Vec<CellId>,
}

impl MorseFunction {
    pub fn new(values: Vec<Rational64>) -> Self {
        MorseFunction { values }
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(values: I) -> Self {
        MorseFunction {
            values: values.into_iter().map(Rational64::from_integer).collect(),
        }
    }

    /// `f(σ) = dim σ`.
    pub fn dimension_map(k: &SimplicialComplex) -> Self {
        Self::from_integers(k.cell_ids().map(|c| k.dim_of(c) as i64))
    }

    /// Builds a function from optional per-cell values, failing on the first
    /// cell without one.
    pub fn from_partial(k: &SimplicialComplex, values: Vec<Option<Rational64>>) -> Result<Self> {
        let mut out = Vec::with_capacity(values.len());
        for (i, v) in values.into_iter().enumerate() {
            match v {
                Some(v) => out.push(v),
                None => return Err(Error::MissingValue(k.cell_name(CellId(i as u32)))),
            }
        }
        if out.len() != k.num_cells() {
            let missing = CellId(out.len() as u32);
            return Err(Error::MissingValue(k.cell_name(missing)));
        }
        Ok(MorseFunction { values: out })
    }

    pub fn value(&self, c: CellId) -> Rational64 {
        self.values[c.index()]
    }

    pub fn values(&self) -> &[Rational64] {
        &self.values
    }

    fn check_len(&self, k: &SimplicialComplex) -> Result<()> {
        if self.values.len() < k.num_cells() {
            Err(Error::MissingValue(
                k.cell_name(CellId(self.values.len() as u32)),
            ))
        } else {
            Ok(())
        }
    }

    /// Checks the Morse condition at every cell; `Ok(Err(_))` carries the
    /// first violating cell.
    pub fn check_morse(
        &self,
        k: &SimplicialComplex,
    ) -> Result<std::result::Result<(), MorseViolation>> {
        self.check_len(k)?;
        for c in k.cell_ids() {
            let v = self.value(c);
            let up: Vec<CellId> = k
                .cofaces(c)
                .iter()
                .map(|i| i.cell)
                .filter(|&t| self.value(t) <= v)
                .collect();
            let down: Vec<CellId> = k
                .faces(c)
                .iter()
                .map(|i| i.cell)
                .filter(|&n| self.value(n) >= v)
                .collect();
            if up.len() > 1 || down.len() > 1 || (!up.is_empty() && !down.is_empty()) {
                return Ok(Err(MorseViolation {
                    cell: c,
                    exceptional_cofaces: up,
                    exceptional_faces: down,
                }));
            }
        }
        Ok(Ok(()))
    }

    pub fn is_morse_function(&self, k: &SimplicialComplex) -> Result<bool> {
        Ok(self.check_morse(k)?.is_ok())
    }

    /// Pairs every exceptional incidence `σ ≺ τ`, `f(σ) >= f(τ)`.
    pub fn gradient_field<'a>(&self, k: &'a SimplicialComplex) -> Result<DiscreteVectorField<'a>> {
        if let Err(v) = self.check_morse(k)? {
            return Err(Error::NotMorse { cell: v.cell });
        }
        let pairs = k
            .oriented_incidences()
            .filter(|i| self.value(i.face) >= self.value(i.coface))
            .map(|i| (i.face, i.coface));
        Ok(DiscreteVectorField::validate(k, pairs)?)
    }

    /// For each immediate incidence, whether `f(face) < f(coface)`.
    fn comparison_profile(&self, k: &SimplicialComplex) -> Vec<bool> {
        k.oriented_incidences()
            .map(|i| self.value(i.face) < self.value(i.coface))
            .collect()
    }

    /// Equivalence of two Morse functions, decided both from the strict
    /// comparison profile and from equality of the induced fields. The two
    /// answers must coincide.
    pub fn equivalent(&self, other: &MorseFunction, k: &SimplicialComplex) -> Result<bool> {
        let by_profile = self.comparison_profile(k) == other.comparison_profile(k);
        let by_field = self.gradient_field(k)? == other.gradient_field(k)?;
        if by_profile != by_field {
            return Err(Error::Internal(format!(
                "comparison profile says {by_profile}, gradient fields say {by_field}"
            )));
        }
        Ok(by_profile)
    }
}
