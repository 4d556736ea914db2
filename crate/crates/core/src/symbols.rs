//! Graded symbols of divergence-free vector fields with transverse parameters.
//!
//! Fields live on `x_1..x_m` with coefficients polynomial in `x` and the
//! transverse variables `s_1..s_q`; they never have `∂/∂s` components. A field
//! of x-degree `d` and s-degree `ℓ` sits in bi-degree `(d + ℓ − 1, ℓ)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{linalg, Chart, Monomial, Polynomial, Rational};
use crate::par;

/// Default bound on either side of a bracket matrix.
pub const DEFAULT_CAP: usize = 2000;
/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "JETCERT_SYMBOLS_CAP";

pub fn dimension_cap() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

/// The chart `x_1..x_m, s_1..s_q`.
pub fn universe(m: usize, q: usize) -> Chart {
    let names = (1..=m)
        .map(|i| format!("x{i}"))
        .chain((1..=q).map(|i| format!("s{i}")));
    Chart::new(names).expect("distinct names")
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim 𝔥^k = m·C(m+k, m−1) − C(m+k−1, m−1)`, and `m` for `k = −1`.
pub fn h_dimension(m: usize, k: i64) -> usize {
    let m = m as i64;
    if k == -1 {
        return m as usize;
    }
    (m * binomial(m + k, m - 1) - binomial(m + k - 1, m - 1)) as usize
}

/// Monomials of total degree `d` in the chart variables `lo..hi`.
fn monomials(lo: usize, hi: usize, d: u32) -> Vec<Monomial> {
    fn rec(i: usize, hi: usize, left: u32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::from_pairs(cur.iter().copied()));
            return;
        }
        if i == hi {
            return;
        }
        for e in (0..=left).rev() {
            if e > 0 {
                cur.push((i, e));
            }
            rec(i + 1, hi, left - e, cur, out);
            if e > 0 {
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(lo, hi, d, &mut Vec::new(), &mut out);
    out
}

/// `Σ f_i(x, s) ∂/∂x_i`, homogeneous in `x` and in `s` separately.
#[derive(Clone, PartialEq)]
pub struct HomogeneousField {
    chart: Chart,
    m: usize,
    comps: Vec<Polynomial>,
    /// `(x-degree, s-degree)`; `None` for the zero field.
    degrees: Option<(u32, u32)>,
}

impl HomogeneousField {
    /// Checks bi-homogeneity; the chart must be a [`universe`].
    pub fn new(chart: &Chart, m: usize, comps: Vec<Polynomial>) -> Result<Self> {
        if comps.len() != m || m > chart.dim() {
            return Err(Error::ChartMismatch(format!("{} components for m = {m}", comps.len())));
        }
        let mut degrees = None;
        for c in &comps {
            if c.chart() != chart {
                return Err(Error::ChartMismatch(format!("{} vs {}", c.chart(), chart)));
            }
            for (mono, _) in c.terms() {
                let dx = mono.degree_below(m);
                let d = (dx, mono.degree() - dx);
                match degrees {
                    None => degrees = Some(d),
                    Some(e) if e != d => {
                        return Err(Error::NotHomogeneous(format!("bi-degrees {e:?} and {d:?}")));
                    }
                    _ => {}
                }
            }
        }
        Ok(HomogeneousField {
            chart: chart.clone(),
            m,
            comps,
            degrees,
        })
    }

    pub fn zero(chart: &Chart, m: usize) -> Self {
        HomogeneousField {
            chart: chart.clone(),
            m,
            comps: vec![Polynomial::zero(chart); m],
            degrees: None,
        }
    }

    /// `c · ∂/∂x_i`.
    pub fn coordinate(chart: &Chart, m: usize, i: usize, coefficient: Polynomial) -> Result<Self> {
        let mut comps = vec![Polynomial::zero(chart); m];
        comps[i] = coefficient;
        HomogeneousField::new(chart, m, comps)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_none()
    }

    pub fn x_degree(&self) -> Option<u32> {
        self.degrees.map(|d| d.0)
    }

    pub fn s_degree(&self) -> Option<u32> {
        self.degrees.map(|d| d.1)
    }

    /// `(k, ℓ)` with `k = x-degree + s-degree − 1`.
    pub fn bidegree(&self) -> Option<(i64, u32)> {
        self.degrees.map(|(d, l)| (d as i64 + l as i64 - 1, l))
    }

    /// `Σ ∂f_i/∂x_i`.
    pub fn divergence(&self) -> Polynomial {
        self.comps
            .iter()
            .enumerate()
            .fold(Polynomial::zero(&self.chart), |acc, (i, c)| &acc + &c.derivative(i))
    }

    pub fn add(&self, other: &HomogeneousField) -> Result<HomogeneousField> {
        same_universe(self, other)?;
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect();
        HomogeneousField::new(&self.chart, self.m, comps)
    }

    pub fn scale(&self, c: &Rational) -> HomogeneousField {
        let comps: Vec<Polynomial> = self.comps.iter().map(|p| p.scale(c)).collect();
        HomogeneousField::new(&self.chart, self.m, comps).expect("scaling keeps degrees")
    }

    /// Multiplies every component by a polynomial.
    pub fn mul_poly(&self, p: &Polynomial) -> Result<HomogeneousField> {
        let comps = self.comps.iter().map(|c| c * p).collect();
        HomogeneousField::new(&self.chart, self.m, comps)
    }

    /// Coordinates on `(component, monomial)` keys.
    fn coordinates(&self) -> impl Iterator<Item = ((usize, Monomial), Rational)> + '_ {
        self.comps
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.terms().map(move |(mono, v)| ((i, mono.clone()), v.clone())))
    }
}

impl fmt::Display for HomogeneousField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*d/d{}", self.chart.name(i)))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for HomogeneousField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn same_universe(u: &HomogeneousField, v: &HomogeneousField) -> Result<()> {
    if u.chart != v.chart || u.m != v.m {
        return Err(Error::ChartMismatch(format!("{} vs {}", u.chart, v.chart)));
    }
    Ok(())
}

pub fn divergence_free(v: &HomogeneousField) -> bool {
    v.divergence().is_zero()
}

/// Bracket of the x-components; the `s` are constants.
pub fn graded_bracket(u: &HomogeneousField, v: &HomogeneousField) -> Result<HomogeneousField> {
    same_universe(u, v)?;
    let m = u.m;
    let apply = |a: &HomogeneousField, f: &Polynomial| {
        (0..m).fold(Polynomial::zero(&a.chart), |acc, j| {
            if a.comps[j].is_zero() {
                acc
            } else {
                &acc + &(&a.comps[j] * &f.derivative(j))
            }
        })
    };
    let comps = (0..m).map(|i| &apply(u, &v.comps[i]) - &apply(v, &u.comps[i])).collect();
    HomogeneousField::new(&u.chart, m, comps)
}

/// Bi-graded piece with an exact basis.
#[derive(Clone, Debug)]
pub struct GradedSpace {
    pub k: i64,
    pub l: u32,
    pub basis: Vec<HomogeneousField>,
}

impl GradedSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Basis of `𝔥^k`: divergence-free fields with x-only components of degree
/// `k + 1` (the constant fields for `k = −1`), on the universe `chart`.
pub fn h_basis_on(chart: &Chart, m: usize, k: i64) -> Result<GradedSpace> {
    if m == 0 || k < -1 {
        return Err(Error::InvalidArgument(format!("𝔥^{k} with m = {m}")));
    }
    let d = (k + 1) as u32;
    let monos = monomials(0, m, d);
    // Unknowns: (component i, monomial) pairs.
    let unknowns: Vec<(usize, &Monomial)> = (0..m).flat_map(|i| monos.iter().map(move |mo| (i, mo))).collect();
    let basis_vec: Vec<Vec<Rational>> = if d == 0 {
        (0..unknowns.len())
            .map(|j| (0..unknowns.len()).map(|i| Rational::from_integer((i == j).into())).collect())
            .collect()
    } else {
        let targets = monomials(0, m, d - 1);
        let row_of: BTreeMap<&Monomial, usize> = targets.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut rows = vec![vec![Rational::zero(); unknowns.len()]; targets.len()];
        for (col, (i, mo)) in unknowns.iter().enumerate() {
            let e = mo.exponent(*i);
            if e > 0 {
                let lowered = mo.with_exponent(*i, e - 1);
                rows[row_of[&lowered]][col] = Rational::from_integer(e.into());
            }
        }
        linalg::nullspace(&rows, unknowns.len())
    };
    let basis = basis_vec
        .into_iter()
        .map(|vec| {
            let mut comps = vec![Polynomial::zero(chart); m];
            for (col, c) in vec.into_iter().enumerate() {
                let (i, mo) = unknowns[col];
                comps[i].add_term(mo.clone(), c);
            }
            HomogeneousField::new(chart, m, comps)
        })
        .collect::<Result<_>>()?;
    Ok(GradedSpace { k, l: 0, basis })
}

pub fn h_basis(m: usize, k: i64) -> Result<GradedSpace> {
    h_basis_on(&universe(m, 0), m, k)
}

/// The model `ḡ^{k,ℓ} = C[s]_ℓ ⊗ 𝔥^{k−ℓ}` on `universe(m, q)`.
pub fn model_space(m: usize, q: usize, k: i64, l: u32) -> Result<GradedSpace> {
    let chart = universe(m, q);
    let h = h_basis_on(&chart, m, k - l as i64)?;
    let smonos = monomials(m, m + q, l);
    let mut basis = Vec::with_capacity(smonos.len() * h.basis.len());
    for s in &smonos {
        let sp = Polynomial::term(&chart, s.clone(), Rational::from_integer(1.into()));
        for x in &h.basis {
            basis.push(x.mul_poly(&sp)?);
        }
    }
    Ok(GradedSpace { k, l, basis })
}

/// `𝔞 = ḡ^{0,1} = span{s_i ∂/∂x_j}`.
pub fn a_basis(m: usize, q: usize) -> Vec<HomogeneousField> {
    let chart = universe(m, q);
    let mut out = Vec::new();
    for i in 0..q {
        for j in 0..m {
            let s = Polynomial::var(&chart, m + i);
            out.push(HomogeneousField::coordinate(&chart, m, j, s).expect("homogeneous"));
        }
    }
    out
}

/// Solves `[∂/∂x_1, Y] = X`, `div Y = 0` for `X ∈ 𝔥^k`.
///
/// `Y = Y₀ − R·E/(k+m)` with `Y₀` the x₁-antiderivatives of `X`,
/// `R = div Y₀` (free of `x_1`) and `E = Σ_{j≥2} x_j ∂_j`.
pub fn transvection_solve(x: &HomogeneousField) -> Result<HomogeneousField> {
    if x.is_zero() {
        return Ok(x.clone());
    }
    let (d, l) = x.degrees.expect("nonzero");
    if l != 0 || d == 0 {
        return Err(Error::NotHomogeneous(format!(
            "expected x-degree ≥ 1 and no s-dependence, got ({d}, {l})"
        )));
    }
    if !divergence_free(x) {
        return Err(Error::NotDivergenceFree);
    }
    let m = x.m;
    let k = d - 1;
    let y0: Vec<Polynomial> = x.comps.iter().map(|c| c.antiderivative(0)).collect();
    let y0 = HomogeneousField::new(&x.chart, m, y0)?;
    let r = y0.divergence();
    let factor = Rational::new(1.into(), ((k as usize + m) as i64).into());
    let comps = (0..m)
        .map(|j| {
            if j == 0 {
                y0.comps[0].clone()
            } else {
                &y0.comps[j] - &(&r * &Polynomial::var(&x.chart, j)).scale(&factor)
            }
        })
        .collect();
    HomogeneousField::new(&x.chart, m, comps)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityReport {
    pub m: usize,
    pub q: usize,
    pub k: i64,
    pub l: u32,
    pub target_dim: usize,
    pub rank: usize,
    pub surjective: bool,
}

/// Rank of `[𝔞, ḡ^{k,ℓ}]` inside `ḡ^{k,ℓ+1}`.
///
/// Images that leave the target span are reported as an error rather than
/// counted, since the model would then not be closed under the bracket.
pub fn bracket_surjectivity_check(m: usize, q: usize, k: i64, l: u32) -> Result<SurjectivityReport> {
    bracket_surjectivity_check_capped(m, q, k, l, dimension_cap())
}

pub fn bracket_surjectivity_check_capped(
    m: usize,
    q: usize,
    k: i64,
    l: u32,
    cap: usize,
) -> Result<SurjectivityReport> {
    if m < 2 || q < 1 || l as i64 > k {
        return Err(Error::InvalidArgument(format!("m = {m}, q = {q}, k = {k}, ℓ = {l}")));
    }
    let source = model_space(m, q, k, l)?;
    let target = model_space(m, q, k, l + 1)?;
    let a = a_basis(m, q);
    let rows = a.len() * source.dimension();
    if rows > cap || target.dimension() > cap {
        return Err(Error::DimensionCap {
            size: rows.max(target.dimension()),
            cap,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..a.len())
        .flat_map(|i| (0..source.dimension()).map(move |j| (i, j)))
        .collect();
    let images = par::map(&pairs, |&(i, j)| graded_bracket(&a[i], &source.basis[j]));
    let images: Vec<HomogeneousField> = images.into_iter().collect::<Result<_>>()?;

    let mut keys: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    for f in target.basis.iter().chain(&images) {
        for (key, _) in f.coordinates() {
            let n = keys.len();
            keys.entry(key).or_insert(n);
        }
    }
    let to_row = |f: &HomogeneousField| {
        let mut row = vec![Rational::zero(); keys.len()];
        for (key, v) in f.coordinates() {
            row[keys[&key]] = v;
        }
        row
    };
    let target_rows: Vec<Vec<Rational>> = target.basis.iter().map(to_row).collect();
    let image_rows: Vec<Vec<Rational>> = images.iter().map(to_row).collect();
    let target_dim = linalg::rank(&target_rows);
    let rank = linalg::rank(&image_rows);
    let joint: Vec<Vec<Rational>> = target_rows.into_iter().chain(image_rows).collect();
    if linalg::rank(&joint) != target_dim {
        return Err(Error::InvalidArgument(format!(
            "brackets leave ḡ^({k},{}) for m = {m}, q = {q}",
            l + 1
        )));
    }
    Ok(SurjectivityReport {
        m,
        q,
        k,
        l,
        target_dim,
        rank,
        surjective: rank == target_dim,
    })
}
