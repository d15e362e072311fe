//! Text formats shared by the file outputs: C-style float formatting and the
//! JSON encoding of complex matrices as nested `[re, im]` arrays.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Emulates C `printf("%.12e", x)`.
pub fn fmt_e12(x: f64) -> String {
    if !x.is_finite() {
        return non_finite(x);
    }
    c_exponent(&format!("{x:.12e}"))
}

/// Emulates C `printf("%.17g", x)`.
pub fn fmt_g17(x: f64) -> String {
    const P: i32 = 17;
    if !x.is_finite() {
        return non_finite(x);
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (_, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let (mantissa, _) = sci.split_once('e').unwrap();
        c_exponent(&format!("{}e{exp}", strip_zeros(mantissa)))
    } else {
        let fixed = format!("{:.*}", (P - 1 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    }
}

fn non_finite(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rewrites Rust's `1.5e-3` exponent into C's `1.5e-03`.
fn c_exponent(s: &str) -> String {
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Row-major nested `[re, im]` representation of a complex matrix.
pub fn cmatrix_rows(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

pub fn cmatrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<DMatrix<Complex64>, String> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err("ragged matrix rows".into());
    }
    Ok(DMatrix::from_fn(nrows, ncols, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1])))
}

pub fn cvector_entries(v: &DVector<Complex64>) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// `#[serde(with = "cmatrix_serde")]` adapter.
pub mod cmatrix_serde {
    use super::*;

    pub fn serialize<S: Serializer>(m: &DMatrix<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        cmatrix_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<Complex64>, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        cmatrix_from_rows(&rows).map_err(D::Error::custom)
    }
}

/// Adapter for `Vec<DMatrix<Complex64>>`.
pub mod cmatrix_vec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(ms: &[DMatrix<Complex64>], s: S) -> Result<S::Ok, S::Error> {
        ms.iter().map(cmatrix_rows).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<DMatrix<Complex64>>, D::Error> {
        let all = Vec::<Vec<Vec<[f64; 2]>>>::deserialize(d)?;
        all.iter().map(|rows| cmatrix_from_rows(rows).map_err(D::Error::custom)).collect()
    }
}
