//! Functions on `{-1,1}^d` stored as `2^d` tables, and their Fourier
//! spectra.
//!
//! Index convention: bit `i` of a point index is 0 exactly when coordinate
//! `i` is `+1`. Masks use the same bit positions, so `χ_α(x)` is
//! `(-1)^{popcount(α & x)}`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_within, Error, Result};
use crate::projection::{full_mask, Mask};
use crate::scalar::Scalar;

/// Default largest table dimension accepted by the transform.
pub const DEFAULT_TABLE_DIM_CAP: usize = 20;

/// Hard ceiling on table dimension (point indices are `u64`).
pub const MAX_TABLE_DIM: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableMode {
    /// Values in `{-1, +1}`.
    Pm1,
    /// Values in `{0, 1}`.
    Indicator,
}

impl TableMode {
    fn admits(self, v: i8) -> bool {
        match self {
            TableMode::Pm1 => v == 1 || v == -1,
            TableMode::Indicator => v == 0 || v == 1,
        }
    }
}

/// A `booltable.v1` table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TableDocument", into = "TableDocument")]
pub struct BooleanTable {
    dim: usize,
    mode: TableMode,
    values: Vec<i8>,
}

#[derive(Serialize, Deserialize)]
struct TableDocument {
    dim: usize,
    mode: TableMode,
    values: Vec<i8>,
}

impl TryFrom<TableDocument> for BooleanTable {
    type Error = Error;

    fn try_from(doc: TableDocument) -> Result<Self> {
        BooleanTable::new(doc.dim, doc.mode, doc.values)
    }
}

impl From<BooleanTable> for TableDocument {
    fn from(t: BooleanTable) -> Self {
        TableDocument {
            dim: t.dim,
            mode: t.mode,
            values: t.values,
        }
    }
}

impl BooleanTable {
    pub fn new(dim: usize, mode: TableMode, values: Vec<i8>) -> Result<Self> {
        if dim > MAX_TABLE_DIM {
            return Err(Error::size("table dimension", dim as u128, MAX_TABLE_DIM as u128));
        }
        if values.len() != 1usize << dim {
            return Err(Error::Input(format!(
                "table of dimension {dim} needs {} values, got {}",
                1u64 << dim,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|&v| !mode.admits(v)) {
            return Err(Error::Input(format!(
                "value {} at index {pos} is not allowed in {mode:?} mode",
                values[pos]
            )));
        }
        Ok(BooleanTable { dim, mode, values })
    }

    pub fn from_fn(dim: usize, mode: TableMode, f: impl FnMut(u64) -> i8) -> Result<Self> {
        if dim > MAX_TABLE_DIM {
            return Err(Error::size("table dimension", dim as u128, MAX_TABLE_DIM as u128));
        }
        Self::new(dim, mode, (0..1u64 << dim).map(f).collect())
    }

    pub fn constant(dim: usize, mode: TableMode, value: i8) -> Result<Self> {
        Self::from_fn(dim, mode, |_| value)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> TableMode {
        self.mode
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, x: u64) -> i8 {
        self.values[x as usize]
    }

    /// `f(-x) = -f(x)` everywhere (always false in indicator mode).
    pub fn is_folded(&self) -> bool {
        if self.mode != TableMode::Pm1 {
            return false;
        }
        let flip = full_mask(self.dim);
        (0..self.values.len() as u64).all(|x| self.get(x) == -self.get(x ^ flip))
    }

    /// Number of entries equal to `+1`.
    pub fn ones(&self) -> u64 {
        self.values.iter().filter(|&&v| v == 1).count() as u64
    }

    /// Same support as an indicator (`+1 -> 1`, `-1 -> 0`), or as a `±1`
    /// table (`1 -> +1`, `0 -> -1`).
    pub fn with_mode(&self, mode: TableMode) -> BooleanTable {
        let values = match (self.mode, mode) {
            (a, b) if a == b => self.values.clone(),
            (TableMode::Pm1, _) => self.values.iter().map(|&v| (v == 1) as i8).collect(),
            (TableMode::Indicator, _) => self.values.iter().map(|&v| if v == 1 { 1 } else { -1 }).collect(),
        };
        BooleanTable {
            dim: self.dim,
            mode,
            values,
        }
    }
}

/// `χ_α(x)`.
pub fn character(mask: Mask, x: u64) -> i8 {
    if (mask & x).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Index of the point with the given `±1` coordinates.
pub fn point_from_signs(signs: &[i8]) -> Result<u64> {
    if signs.len() > 64 {
        return Err(Error::Input(format!("{} coordinates exceed 64", signs.len())));
    }
    signs.iter().enumerate().try_fold(0u64, |acc, (i, &s)| match s {
        1 => Ok(acc),
        -1 => Ok(acc | (1 << i)),
        _ => Err(Error::Input(format!("coordinate {} is {s}, expected ±1", i + 1))),
    })
}

/// `±1` coordinates of point `x` in dimension `dim`.
pub fn signs_of_point(x: u64, dim: usize) -> Vec<i8> {
    (0..dim).map(|i| if (x >> i) & 1 == 0 { 1 } else { -1 }).collect()
}

/// Forces `f(-x) = -f(x)`, keeping the value at the representative of each
/// antipodal pair (the point whose first coordinate is `+1`).
pub fn fold(table: &BooleanTable) -> Result<BooleanTable> {
    if table.mode != TableMode::Pm1 {
        return Err(Error::Mode("folding needs a ±1 table".into()));
    }
    let flip = full_mask(table.dim);
    let mut values = table.values.clone();
    for x in (0..values.len() as u64).filter(|x| x & 1 == 0) {
        values[(x ^ flip) as usize] = -values[x as usize];
    }
    Ok(BooleanTable {
        dim: table.dim,
        mode: TableMode::Pm1,
        values,
    })
}

/// Dictator `x ↦ x_j` on `{-1,1}^d` (`j` 0-based).
pub fn long_code(j: usize, dim: usize) -> Result<BooleanTable> {
    if j >= dim {
        return Err(Error::Input(format!("label {} outside [1, {dim}]", j + 1)));
    }
    BooleanTable::from_fn(dim, TableMode::Pm1, |x| if (x >> j) & 1 == 0 { 1 } else { -1 })
}

/// Fourier coefficients indexed by subset mask.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSpectrum<S> {
    dim: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> FourierSpectrum<S> {
    pub fn new(dim: usize, coeffs: Vec<S>) -> Result<Self> {
        if dim > MAX_TABLE_DIM || coeffs.len() != 1usize << dim {
            return Err(Error::Input(format!(
                "spectrum of dimension {dim} cannot hold {} coefficients",
                coeffs.len()
            )));
        }
        Ok(FourierSpectrum { dim, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, alpha: Mask) -> &S {
        &self.coeffs[alpha as usize]
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// `(α, Â_α)` for every nonzero coefficient, in mask order.
    pub fn nonzero(&self) -> impl Iterator<Item = (Mask, &S)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| (a as Mask, c))
    }

    /// Every coefficient at an even level vanishes.
    pub fn is_odd(&self) -> bool {
        self.nonzero().all(|(a, _)| a.count_ones() % 2 == 1)
    }
}

/// Walsh–Hadamard transform with the default dimension cap.
pub fn wht<S: Scalar>(table: &BooleanTable) -> Result<FourierSpectrum<S>> {
    wht_capped(table, DEFAULT_TABLE_DIM_CAP)
}

/// `Â_α = E_x[f(x) χ_α(x)]`, via the in-place butterfly on integers.
pub fn wht_capped<S: Scalar>(table: &BooleanTable, dim_cap: usize) -> Result<FourierSpectrum<S>> {
    ensure_within("table dimension", table.dim as u128, dim_cap as u128)?;
    let mut acc: Vec<i64> = table.values.iter().map(|&v| v as i64).collect();
    butterfly(&mut acc);
    let scale = S::inv_pow2(table.dim as u32);
    let coeffs = acc
        .into_iter()
        .map(|c| S::from_i64_lossy(c) * scale.clone())
        .collect();
    Ok(FourierSpectrum {
        dim: table.dim,
        coeffs,
    })
}

fn butterfly<T>(a: &mut [T])
where
    T: Clone + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let mut h = 1;
    while h < a.len() {
        for start in (0..a.len()).step_by(2 * h) {
            for i in start..start + h {
                let (p, q) = (a[i].clone(), a[i + h].clone());
                a[i] = p.clone() + q.clone();
                a[i + h] = p - q;
            }
        }
        h *= 2;
    }
}

/// `f(x) = Σ_α Â_α χ_α(x)`; fails unless every value is admissible in
/// `mode`.
pub fn inverse_wht<S: Scalar>(spec: &FourierSpectrum<S>, mode: TableMode) -> Result<BooleanTable> {
    let mut vals = spec.coeffs.clone();
    butterfly(&mut vals);
    let values = vals
        .iter()
        .enumerate()
        .map(|(x, v)| {
            let rounded = v.to_f64().map(f64::round).unwrap_or(f64::NAN);
            let as_int = rounded as i8;
            if rounded.is_finite() && mode.admits(as_int) && v.approx_eq(&S::from_i64_lossy(as_int as i64)) {
                Ok(as_int)
            } else {
                Err(Error::Input(format!("inverse transform gives {v} at point {x}")))
            }
        })
        .collect::<Result<Vec<i8>>>()?;
    BooleanTable::new(spec.dim, mode, values)
}

/// `Σ_α Â_α²`.
pub fn parseval<S: Scalar>(spec: &FourierSpectrum<S>) -> S {
    spec.coeffs
        .iter()
        .fold(S::zero(), |acc, c| acc + c.clone() * c.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;

    #[test]
    fn constant_and_dictator_spectra() {
        let one = BooleanTable::constant(3, TableMode::Pm1, 1).unwrap();
        let s = wht::<Exact>(&one).unwrap();
        assert_eq!(s.nonzero().map(|(a, _)| a).collect::<Vec<_>>(), vec![0]);

        let d = long_code(1, 3).unwrap();
        let s = wht::<Exact>(&d).unwrap();
        let nz: Vec<_> = s.nonzero().map(|(a, c)| (a, c.clone())).collect();
        assert_eq!(nz, vec![(0b010, Exact::ratio(1, 1))]);
    }

    #[test]
    fn character_examples() {
        assert_eq!(character(0, 0b101), 1);
        let x = point_from_signs(&[-1, -1, 1]).unwrap();
        assert_eq!(character(0b011, x), 1);
        assert_eq!(character(0b001, x), -1);
        assert_eq!(signs_of_point(x, 3), vec![-1, -1, 1]);
    }

    #[test]
    fn fold_constant_keeps_representatives() {
        let one = BooleanTable::constant(2, TableMode::Pm1, 1).unwrap();
        let f = fold(&one).unwrap();
        // points 0 and 2 have x_1 = +1
        assert_eq!(f.values(), &[1, -1, 1, -1]);
        assert!(f.is_folded());
        assert_eq!(fold(&f).unwrap(), f);
        let ind = one.with_mode(TableMode::Indicator);
        assert!(matches!(fold(&ind), Err(Error::Mode(_))));
    }

    #[test]
    fn long_code_examples() {
        assert_eq!(long_code(0, 1).unwrap().values(), &[1, -1]);
        let lc = long_code(2, 4).unwrap();
        assert_eq!(fold(&lc).unwrap(), lc);
        assert_eq!(*wht::<Exact>(&lc).unwrap().coeff(0b0100), Exact::ratio(1, 1));
        assert!(long_code(4, 4).is_err());
    }

    #[test]
    fn parseval_and_round_trip() {
        let half = BooleanTable::from_fn(3, TableMode::Indicator, |x| (x & 1) as i8).unwrap();
        let s = wht::<Exact>(&half).unwrap();
        assert_eq!(parseval(&s), Exact::ratio(1, 2));
        assert_eq!(inverse_wht(&s, TableMode::Indicator).unwrap(), half);
        let sf = wht::<f64>(&half).unwrap();
        assert_eq!(inverse_wht(&sf, TableMode::Indicator).unwrap(), half);
        assert!(inverse_wht(&s, TableMode::Pm1).is_err());
    }

    #[test]
    fn table_validation_and_json() {
        assert!(BooleanTable::new(2, TableMode::Pm1, vec![1, 1, 1]).is_err());
        assert!(BooleanTable::new(1, TableMode::Pm1, vec![1, 0]).is_err());
        let t = long_code(0, 2).unwrap();
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(text, r#"{"dim":2,"mode":"pm1","values":[1,-1,1,-1]}"#);
        assert_eq!(serde_json::from_str::<BooleanTable>(&text).unwrap(), t);
        assert!(serde_json::from_str::<BooleanTable>(r#"{"dim":1,"mode":"indicator","values":[1,-1]}"#).is_err());
    }

    #[test]
    fn wht_cap() {
        let t = BooleanTable::constant(4, TableMode::Pm1, 1).unwrap();
        assert!(matches!(wht_capped::<Exact>(&t, 3), Err(Error::Size { .. })));
    }
}
