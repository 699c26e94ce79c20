//! The main-term polynomials `S_k`, `R_k`, `V_k`, `W_k` and the operations
//! needed to compare them.
//!
//! Two indeterminates occur: `Y = log log x` and `X = log log x + β`.
//! A polynomial in `X` becomes one in `Y` by `q(Y) = p(Y + β)`, i.e.
//! [`shift_poly`] by `+β`.

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::constants::ConstantsTable;
use crate::error::{Error, Result};
use crate::partitions::Partitions;
use crate::precision::{binomial, factorial, to_decimal, Real};

pub const MAX_DEGREE: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    /// `X = log log x + β`
    LogLogPlusBeta,
    /// `Y = log log x`
    LogLog,
}

/// Polynomial with ascending coefficients; trailing zeros are trimmed, so
/// the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePoly {
    coeffs: Vec<Real>,
    pub var: Variable,
}

impl DensePoly {
    pub fn new(mut coeffs: Vec<Real>, var: Variable) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::Resource(format!(
                "degree {} exceeds the supported {MAX_DEGREE}",
                coeffs.len() - 1
            )));
        }
        Ok(DensePoly { coeffs, var })
    }

    pub fn zero(var: Variable) -> Self {
        DensePoly {
            coeffs: Vec::new(),
            var,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    /// Coefficient of the `j`-th power; zero past the degree.
    pub fn coeff(&self, j: usize, bits: u32) -> Real {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| Float::with_val(bits, 0))
    }

    pub fn leading(&self) -> Option<&Real> {
        self.coeffs.last()
    }

    fn bits(&self) -> u32 {
        self.coeffs.iter().map(|c| c.prec()).max().unwrap_or(64)
    }

    pub fn add(&self, o: &DensePoly) -> Result<DensePoly> {
        self.same_var(o)?;
        let bits = self.bits().max(o.bits());
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|j| Float::with_val(bits, self.coeff(j, bits) + o.coeff(j, bits)))
            .collect();
        DensePoly::new(c, self.var)
    }

    pub fn scale(&self, s: &Real) -> DensePoly {
        let c = self
            .coeffs
            .iter()
            .map(|a| Float::with_val(a.prec(), a * s))
            .collect();
        DensePoly::new(c, self.var).expect("scaling keeps the degree")
    }

    /// `max_j |a_j − b_j|`; polynomials in different variables are not comparable.
    pub fn max_coeff_diff(&self, o: &DensePoly) -> Result<Real> {
        self.same_var(o)?;
        let bits = self.bits().max(o.bits());
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut worst = Float::with_val(bits, 0);
        for j in 0..n {
            let d = Float::with_val(bits, self.coeff(j, bits) - o.coeff(j, bits)).abs();
            if d > worst {
                worst = d;
            }
        }
        Ok(worst)
    }

    fn same_var(&self, o: &DensePoly) -> Result<()> {
        if self.var != o.var {
            return Err(Error::Precondition(format!(
                "polynomials in {:?} and {:?} cannot be combined",
                self.var, o.var
            )));
        }
        Ok(())
    }

    pub fn dump(&self, digits: usize) -> PolyDump {
        PolyDump {
            variable_tag: self.var,
            coefficients: self.coeffs.iter().map(|c| to_decimal(c, digits)).collect(),
        }
    }
}

/// JSON form of a polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyDump {
    pub variable_tag: Variable,
    pub coefficients: Vec<String>,
}

/// Horner evaluation.
pub fn eval_poly(p: &DensePoly, y: &Real) -> Real {
    let bits = p.bits().max(y.prec());
    let mut acc = Float::with_val(bits, 0);
    for c in p.coeffs.iter().rev() {
        acc *= y;
        acc += c;
    }
    acc
}

/// `q(Y) = p(Y + s)`, keeping the variable tag.
pub fn shift_poly(p: &DensePoly, s: &Real) -> DensePoly {
    let bits = p.bits().max(s.prec());
    let n = p.coeffs.len();
    let mut out = vec![Float::with_val(bits, 0); n];
    // Σ_i a_i (Y + s)^i = Σ_j Y^j Σ_{i≥j} C(i, j) a_i s^{i−j}
    for (i, a) in p.coeffs.iter().enumerate() {
        let mut sp = Float::with_val(bits, 1);
        for j in (0..=i).rev() {
            let term = Float::with_val(bits, a * &sp) * binomial(bits, i as u32, j as u32);
            out[j] += term;
            sp *= s;
        }
    }
    DensePoly::new(out, p.var).expect("shifting keeps the degree")
}

/// Rewrites a polynomial in `X = Y + β` as one in `Y`.
pub fn to_loglog(p: &DensePoly, beta: &Real) -> Result<DensePoly> {
    if p.var != Variable::LogLogPlusBeta {
        return Err(Error::Precondition("polynomial is already in log log x".into()));
    }
    let mut q = shift_poly(p, beta);
    q.var = Variable::LogLog;
    Ok(q)
}

/// `S_k(Y) = Σ_j λ_{j,k} Y^j`.
pub fn build_sk_tenenbaum(k: u32, tbl: &ConstantsTable) -> Result<DensePoly> {
    let c = (0..=k)
        .map(|j| Ok(tbl.lambda(j, k)?.value))
        .collect::<Result<Vec<_>>>()?;
    DensePoly::new(c, Variable::LogLog)
}

/// `Σ_j C(k, j) a_{k−j} X^j`.
pub fn build_sk_qihu(k: u32, tbl: &ConstantsTable) -> Result<DensePoly> {
    let bits = tbl.bits();
    let c = (0..=k)
        .map(|j| {
            let a = &tbl.qihu_a_at(k - j)?.value;
            Ok(Float::with_val(bits, a * binomial(bits, k, j)))
        })
        .collect::<Result<Vec<_>>>()?;
    DensePoly::new(c, Variable::LogLogPlusBeta)
}

/// `V_k(Y) = Σ_j ν_{k−j}/j! Y^j`.
pub fn build_vk(k: u32, tbl: &ConstantsTable) -> Result<DensePoly> {
    let bits = tbl.bits();
    let c = (0..=k)
        .map(|j| Ok(Float::with_val(bits, &tbl.nu_at(k - j)?.value / factorial(bits, j))))
        .collect::<Result<Vec<_>>>()?;
    DensePoly::new(c, Variable::LogLog)
}

/// `W_k(Y) = Σ_{Σ j n_j = k} S_{n₁}(Y)/n₁! · Π_{j≥2} (P(j)/j)^{n_j}/n_j!`.
pub fn build_wk(k: u32, tbl: &ConstantsTable) -> Result<DensePoly> {
    let bits = tbl.bits();
    let s: Vec<DensePoly> = (0..=k)
        .map(|n| build_sk_tenenbaum(n, tbl))
        .collect::<Result<_>>()?;
    let mut acc = DensePoly::zero(Variable::LogLog);
    for mult in Partitions::new(k)? {
        let n1 = mult.get(1).copied().unwrap_or(0);
        let mut w = Float::with_val(bits, 1) / factorial(bits, n1);
        for (j, &nj) in mult.iter().enumerate().skip(2) {
            if nj == 0 {
                continue;
            }
            let pj = Float::with_val(bits, &tbl.prime_zeta_at(j as u32)?.value / j as u32);
            w *= pj.pow(nj);
            w /= factorial(bits, nj);
        }
        acc = acc.add(&s[n1 as usize].scale(&w))?;
    }
    Ok(acc)
}

/// The closed forms of `R₂`, `R₃`, `R₄` in `X = log log x + β`.
pub fn build_rk_special(k: u32, tbl: &ConstantsTable) -> Result<DensePoly> {
    let bits = tbl.bits();
    let f = |x: &Real| Float::with_val(bits, x);
    let p2 = f(&tbl.prime_zeta_at(2)?.value);
    let z2 = f(&tbl.zeta_at(2)?.value);
    let c2 = Float::with_val(bits, &p2 - &z2);
    let c3 = Float::with_val(bits, &tbl.prime_zeta_at(3)?.value + &tbl.zeta_at(3)?.value);
    let q = |num: u32, den: u32| Float::with_val(bits, num) / den;
    let c = match k {
        2 => vec![c2 / 2u32, f(&Float::with_val(bits, 0)), q(1, 2)],
        3 => vec![c3 / 3u32, c2 / 2u32, f(&Float::with_val(bits, 0)), q(1, 6)],
        4 => {
            let p4 = &tbl.prime_zeta_at(4)?.value;
            let z4 = &tbl.zeta_at(4)?.value;
            let mut c0 = Float::with_val(bits, p4 / 4u32);
            c0 += Float::with_val(bits, z4 / 16u32);
            c0 += Float::with_val(bits, p2.square_ref()) / 8u32;
            c0 -= Float::with_val(bits, &p2 * &z2) / 4u32;
            vec![c0, c3 / 3u32, c2 / 4u32, f(&Float::with_val(bits, 0)), q(1, 24)]
        }
        _ => {
            return Err(Error::Domain(format!(
                "closed forms exist for k = 2, 3, 4 only, got {k}"
            )))
        }
    };
    DensePoly::new(c, Variable::LogLogPlusBeta)
}
