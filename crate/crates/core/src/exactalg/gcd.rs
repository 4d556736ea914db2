//! Multivariate polynomial gcd over the rationals.
//!
//! Recursive scheme: strip monomial content, eliminate variables occurring in only
//! one operand through contents, then run a primitive pseudo-remainder sequence in
//! a shared variable. Results are integer-primitive with positive leading coefficient.

use num_traits::Zero;

use super::{Monomial, Polynomial, Rational};

pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let (a, b) = Polynomial::aligned(a, b);
    let (a, b) = (a.as_ref(), b.as_ref());
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.chart());
    }
    let ma = monomial_content(a);
    let mb = monomial_content(b);
    let m = ma.gcd(&mb);
    let a1 = strip_monomial(a, &ma);
    let b1 = strip_monomial(b, &mb);
    let g = gcd_no_monomial(&a1, &b1);
    if m.is_one() {
        g
    } else {
        g.mul_monomial(&m, &num_traits::One::one()).primitive()
    }
}

/// gcd of a list, stopping early once it reaches one.
pub fn gcd_many<'a, I: IntoIterator<Item = &'a Polynomial>>(polys: I) -> Option<Polynomial> {
    let mut acc: Option<Polynomial> = None;
    for p in polys {
        acc = Some(match acc {
            None => p.primitive(),
            Some(g) => {
                if g.is_one() {
                    return Some(g);
                }
                gcd(&g, p)
            }
        });
    }
    acc
}

fn monomial_content(p: &Polynomial) -> Monomial {
    let mut it = p.terms().map(|(m, _)| m);
    let first = it.next().cloned().unwrap_or_else(Monomial::one);
    it.fold(first, |acc, m| acc.gcd(m))
}

fn strip_monomial(p: &Polynomial, m: &Monomial) -> Polynomial {
    if m.is_one() {
        return p.clone();
    }
    Polynomial::from_terms(
        p.chart(),
        p.terms()
            .map(|(k, c)| (k.div(m).expect("monomial content divides"), c.clone())),
    )
}

fn gcd_no_monomial(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let one = Polynomial::one(a.chart());
    if a.is_constant() || b.is_constant() {
        return one;
    }
    let pa = a.primitive();
    let pb = b.primitive();
    if pa == pb {
        return pa;
    }
    // Cheap divisibility shortcuts; these settle the common denominator cases.
    if pb.len() <= pa.len() && pa.div_exact(&pb).is_some() {
        return pb;
    }
    if pa.len() <= pb.len() && pb.div_exact(&pa).is_some() {
        return pa;
    }

    let va = pa.support_vars();
    let vb = pb.support_vars();
    if let Some(&v) = va.difference(&vb).next() {
        return gcd_with_content(&pb, &pa, v);
    }
    if let Some(&v) = vb.difference(&va).next() {
        return gcd_with_content(&pa, &pb, v);
    }

    let v = *va
        .iter()
        .min_by_key(|&&v| (pa.degree_in(v).max(pb.degree_in(v)), v))
        .expect("non-constant polynomial has a variable");
    let ca = content_in(&pa, v);
    let cb = content_in(&pb, v);
    let ppa = pa.div_exact(&ca).expect("content divides");
    let ppb = pb.div_exact(&cb).expect("content divides");
    let gc = gcd(&ca, &cb);
    if image_degree_bound(&ppa, &ppb, v) == Some(0) {
        return gc.primitive();
    }
    let gp = prs_gcd(ppa, ppb, v);
    (&gc * &gp).primitive()
}

/// `p` with every variable except `v` replaced by its value in `point`.
fn specialize(p: &Polynomial, v: usize, point: &[Rational]) -> Polynomial {
    Polynomial::from_terms(
        p.chart(),
        p.terms().map(|(m, c)| {
            let mut c = c.clone();
            for (i, e) in m.iter().filter(|&(i, _)| i != v) {
                c *= num_traits::pow(point[i].clone(), e as usize);
            }
            (Monomial::var(v, m.exponent(v)), c)
        }),
    )
}

/// Upper bound for `deg_v gcd(a, b)` from a univariate image.
///
/// At a point where neither leading coefficient in `v` vanishes, the image of the
/// gcd keeps its degree and divides both images, so the image gcd bounds it.
fn image_degree_bound(a: &Polynomial, b: &Polynomial, v: usize) -> Option<u32> {
    let (la, lb) = (a.leading_coeff_in(v), b.leading_coeff_in(v));
    let n = a.chart().dim();
    for attempt in 0..4i64 {
        let point: Vec<Rational> = (0..n as i64).map(|i| Rational::from_integer((3 + 5 * attempt + 2 * i).into())).collect();
        if la.eval(&point).is_zero() || lb.eval(&point).is_zero() {
            continue;
        }
        let g = prs_gcd(specialize(a, v, &point), specialize(b, v, &point), v);
        return Some(g.degree_in(v));
    }
    None
}

/// gcd of `b` with `a`, where `v` occurs in `a` but not in `b`.
fn gcd_with_content(b: &Polynomial, a: &Polynomial, v: usize) -> Polynomial {
    let mut g = b.primitive();
    for c in a.coeffs_in(v).iter().filter(|c| !c.is_zero()) {
        if g.is_one() {
            break;
        }
        g = gcd(&g, c);
    }
    g
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub(crate) fn content_in(p: &Polynomial, v: usize) -> Polynomial {
    let coeffs = p.coeffs_in(v);
    gcd_many(coeffs.iter().filter(|c| !c.is_zero())).unwrap_or_else(|| Polynomial::zero(p.chart()))
}

fn primitive_in(p: &Polynomial, v: usize) -> Polynomial {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").primitive()
}

fn pseudo_rem(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let db = b.degree_in(v);
    let lcb = b.leading_coeff_in(v);
    let mut r = a.clone();
    while !r.is_zero() && r.involves(v) && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lcr = r.leading_coeff_in(v);
        let shift = Monomial::var(v, dr - db);
        let t = (&lcr * b).mul_monomial(&shift, &num_traits::One::one());
        r = (&(&lcb * &r) - &t).primitive();
    }
    r
}

fn prs_gcd(mut a: Polynomial, mut b: Polynomial, v: usize) -> Polynomial {
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            return primitive_in(&b, v);
        }
        if !r.involves(v) {
            return Polynomial::one(a.chart());
        }
        a = b;
        b = primitive_in(&r, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Chart;

    fn poly(ch: &Chart, f: impl Fn(&[Polynomial]) -> Polynomial) -> Polynomial {
        let vars: Vec<Polynomial> = (0..ch.dim()).map(|i| Polynomial::var(ch, i)).collect();
        f(&vars)
    }

    #[test]
    fn univariate() {
        let ch = Chart::of(&["x"]);
        let a = poly(&ch, |v| &(&v[0] * &v[0]) - &Polynomial::one(&ch));
        let b = poly(&ch, |v| &v[0] + &Polynomial::one(&ch));
        assert_eq!(gcd(&a, &b), b);
        let c = poly(&ch, |v| &v[0] + &Polynomial::from_int(&ch, 2));
        assert!(gcd(&a, &c).is_one());
    }

    #[test]
    fn multivariate_common_factor() {
        let ch = Chart::of(&["x", "y", "z"]);
        let f = poly(&ch, |v| &(&v[0] * &v[1]) - &v[2]);
        let g1 = poly(&ch, |v| &(&v[0] + &v[1]) + &v[2]);
        let g2 = poly(&ch, |v| &(&v[1] * &v[1]) - &v[0]);
        let a = &f * &g1;
        let b = &(&f * &g2) * &v_of(&ch, 2);
        assert_eq!(gcd(&a, &b), f.primitive());
    }

    fn v_of(ch: &Chart, i: usize) -> Polynomial {
        Polynomial::var(ch, i)
    }

    #[test]
    fn monomial_factors() {
        let ch = Chart::of(&["x", "y"]);
        let a = poly(&ch, |v| &(&v[0] * &v[0]) * &v[1]);
        let b = poly(&ch, |v| &(&v[0] * &v[1]) * &(&v[1] + &v[0]));
        assert_eq!(gcd(&a, &b), poly(&ch, |v| &v[0] * &v[1]));
    }

    #[test]
    fn repeated_factor_in_prs() {
        let ch = Chart::of(&["x", "y"]);
        let l = poly(&ch, |v| &(&v[0] - &v[1]) + &Polynomial::one(&ch));
        let a = &(&l * &l) * &poly(&ch, |v| &v[0] + &Polynomial::from_int(&ch, 3));
        let b = &l * &poly(&ch, |v| &(&v[0] * &v[1]) + &Polynomial::from_int(&ch, 5));
        assert_eq!(gcd(&a, &b), l.primitive());
    }

    #[test]
    fn coprime_trivariate_is_settled_by_an_image() {
        let ch = Chart::of(&["x", "y", "z"]);
        let v = |i| Polynomial::var(&ch, i);
        let c = |n| Polynomial::from_int(&ch, n);
        let d = &(&(&(&v(0) * &v(1)) + &(&v(0) * &v(2))) - &(&c(4) * &(&v(1) * &v(2)))) - &v(2);
        let n = &(&(&v(0) * &v(0)) * &(&v(1) * &v(2))) + &c(7);
        assert!(gcd(&n, &(&d * &d)).is_one());
        assert_eq!(gcd(&(&n * &d), &(&d * &d)), d.primitive());
    }
}
