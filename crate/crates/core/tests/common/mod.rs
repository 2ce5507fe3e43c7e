//! Oracles shared by the property suites and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use hua_core::liedata::{algebra, realform, satake_table, AlgebraData, AlgebraKind, RealForm};
use hua_core::matop::{mat_eval_poly, trace_power, OpMatrix};
use hua_core::minpoly::{diagram_boundary_degree, MinPoly};
use hua_core::params::{rat, ratio, ParamRing, Rat};
use hua_core::pbw::{normal_order, EnvElement, Mono, OrderedBasis};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

pub fn ring() -> ParamRing {
    ParamRing::empty()
}

/// Σ c · normal_order(word).
pub fn element(basis: &Arc<OrderedBasis>, words: &[(Vec<usize>, i64)]) -> EnvElement {
    let r = ring();
    let mut acc = EnvElement::zero(basis, &r);
    for (w, c) in words {
        let u = normal_order(w, basis, &r).unwrap();
        acc = acc.add(&u.scale_rat(&rat(*c)));
    }
    acc
}

pub fn words(n_gens: usize, max_len: usize, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<usize>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..n_gens, 0..=max_len), -3i64..=3), 1..=max_terms)
}

/// (i, j) of a unit-matrix generator.
pub fn unit_of(basis: &OrderedBasis, g: usize) -> (usize, usize) {
    let mut it = basis.generator(g).matrix.entries();
    let (&(i, j), c) = it.next().unwrap();
    assert!(it.next().is_none() && *c == rat(1));
    (i, j)
}

/// Rewrites words one adjacent swap at a time until every word is sorted,
/// with [E_ij, E_kl] = δ_jk E_il − δ_li E_kj written out directly.
pub fn naive(basis: &OrderedBasis, word: &[usize]) -> BTreeMap<Vec<usize>, Rat> {
    let n = basis.n();
    let index: BTreeMap<(usize, usize), usize> = (0..basis.len()).map(|g| (unit_of(basis, g), g)).collect();
    let mut cur: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
    cur.insert(word.to_vec(), rat(1));
    loop {
        let Some((w, c)) = cur.iter().find(|(w, _)| w.windows(2).any(|p| p[0] > p[1])).map(|(w, c)| (w.clone(), c.clone()))
        else {
            break;
        };
        cur.remove(&w);
        let k = w.windows(2).position(|p| p[0] > p[1]).unwrap();
        let (a, b) = (w[k], w[k + 1]);
        let mut swapped = w.clone();
        swapped.swap(k, k + 1);
        *cur.entry(swapped).or_insert_with(Rat::zero) += c.clone();
        let ((i, j), (kk, l)) = (unit_of(basis, a), unit_of(basis, b));
        let mut bracket = Vec::new();
        if j == kk {
            bracket.push((index[&(i, l)], rat(1)));
        }
        if l == i {
            bracket.push((index[&(kk, j)], rat(-1)));
        }
        assert!(i < n && l < n);
        for (g, s) in bracket {
            let mut nw = w[..k].to_vec();
            nw.push(g);
            nw.extend_from_slice(&w[k + 2..]);
            *cur.entry(nw).or_insert_with(Rat::zero) += c.clone() * s;
        }
        cur.retain(|_, c| !c.is_zero());
    }
    cur
}

pub fn run_length(w: &[usize]) -> Mono {
    let mut m = Mono::new();
    for &g in w {
        match m.last_mut() {
            Some((h, p)) if *h as usize == g => *p += 1,
            _ => m.push((g as u16, 1)),
        }
    }
    m
}

pub fn as_map(u: &EnvElement) -> BTreeMap<Mono, Rat> {
    u.terms().map(|(m, c)| (m.clone(), c.constant_value().unwrap())).collect()
}

pub fn naive_map(basis: &OrderedBasis, word: &[usize]) -> BTreeMap<Mono, Rat> {
    let mut out: BTreeMap<Mono, Rat> = BTreeMap::new();
    for (w, c) in naive(basis, word) {
        *out.entry(run_length(&w)).or_insert_with(Rat::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn f_matrix(kind: AlgebraKind, n: usize) -> (OpMatrix, Arc<AlgebraData>) {
    let alg = algebra(kind, n).unwrap();
    let r = ParamRing::empty();
    let f = OpMatrix::from_matrices(&alg.basis, &r, alg.big_n, &alg.f_matrices).unwrap();
    (f, alg)
}

/// tr(𝔽^j) commutes with every basis generator.
pub fn central(kind: AlgebraKind, n: usize, orders: &[u32]) -> Result<(), String> {
    let (f, alg) = f_matrix(kind, n);
    let r = ParamRing::empty();
    for &j in orders {
        let d = trace_power(&f, j);
        for g in 0..alg.basis.len() {
            let x = EnvElement::generator(&alg.basis, &r, g).unwrap();
            if !d.commutator(&x).is_zero() {
                return Err(format!("{kind}{n}: tr F^{j} vs {}", alg.basis.generator(g).name));
            }
        }
    }
    Ok(())
}

/// [X, q(𝔽)] = xᵗ q(𝔽) − q(𝔽) xᵗ for every generator X with matrix x.
pub fn covariance(kind: AlgebraKind, n: usize, roots: &[(i64, i64)]) -> Result<(), String> {
    let (f, alg) = f_matrix(kind, n);
    let r = ParamRing::empty();
    let q = MinPoly::from_roots(&r, roots.iter().map(|&(a, b)| r.constant(ratio(a, b))).collect()).unwrap();
    let qf = mat_eval_poly(&q, &f).unwrap();
    let big = alg.big_n;
    for g in 0..alg.basis.len() {
        let x = &alg.basis.generator(g).matrix;
        let xe = EnvElement::generator(&alg.basis, &r, g).unwrap();
        for i in 0..big {
            for j in 0..big {
                let lhs = xe.commutator(qf.get(i, j));
                let mut rhs = EnvElement::zero(&alg.basis, &r);
                for k in 0..big {
                    let a = x.get(k, i);
                    if !a.is_zero() {
                        rhs = rhs.add(&qf.get(k, j).scale_rat(&a));
                    }
                    let b = x.get(j, k);
                    if !b.is_zero() {
                        rhs = rhs.sub(&qf.get(i, k).scale_rat(&b));
                    }
                }
                if lhs != rhs {
                    return Err(format!("{kind}{n} generator {} entry ({i},{j})", alg.basis.generator(g).name));
                }
            }
        }
    }
    Ok(())
}


/// Rational roots (numerator, denominator) of a random polynomial.
pub fn roots(max: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-4i64..=4, 1i64..=3), 1..=max)
}

pub fn catalog() -> Vec<RealForm> {
    use RealForm::*;
    let mut out = vec![];
    for (p, q) in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (4, 2)] {
        out.push(Upq { p, q });
    }
    out.extend((1..=4).map(|n| Spnr { n }));
    out.extend((2..=4).map(|n| Glnr { n }));
    out
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// c(ρ) = 1, and c(ρ, 0) = 1 where the line-bundle product is defined;
/// both evaluation orders agree.
pub fn c_normalized(form: RealForm) -> Result<(), String> {
    use hua_core::cfun::*;
    let rs = &realform(form).map_err(|e| e.to_string())?.roots;
    let rho = rs.rho();
    let zero = Rat::zero();
    let c = CFunction::new(c_product(rs).unwrap(), rho.clone()).map_err(|e| e.to_string())?;
    let mut vals = vec![c.at(&rho, &zero).unwrap().value.unwrap_or(f64::NAN), c.at_direct(&rho, &zero).unwrap()];
    if let Ok(g) = c_product_line_bundle(rs) {
        let c = CFunction::new(g, rho.clone()).map_err(|e| e.to_string())?;
        vals.push(c.at(&rho, &zero).unwrap().value.unwrap_or(f64::NAN));
        vals.push(c.at_direct(&rho, &zero).unwrap());
    }
    match vals.iter().find(|v| !close(**v, 1.0, 1e-12)) {
        Some(v) => Err(format!("{form}: c(ρ) = {v}")),
        None => Ok(()),
    }
}

/// λ = tα with the first reciprocal Gamma of α at −k: e vanishes and the
/// certificate names α.
pub fn zero_certificates(form: RealForm) -> Result<usize, String> {
    use hua_core::cfun::*;
    let rs = &realform(form).map_err(|e| e.to_string())?.roots;
    let mut count = 0;
    for r in rs.indivisible() {
        for k in 0..3i64 {
            // λ_α/4 + m_α/4 + 1/2 = −k
            let la = rat(-4 * k - 2 - r.mult as i64);
            let lambda: Vec<Rat> = r.vector.iter().map(|a| &la * rat(*a) / rat(2)).collect();
            if rs.coroot_pairing(&lambda, &r.vector) != la {
                return Err(format!("{form}: bad construction for {:?}", r.vector));
            }
            let e = e_function(rs, &lambda).map_err(|e| e.to_string())?;
            let want = Certificate { root: r.vector.clone(), side: Side::Denominator, arg: (-k).to_string() };
            if !e.zero || e.value != 0.0 || !e.certificates.contains(&want) {
                return Err(format!("{form}: no certificate {want:?} at λ = {lambda:?}"));
            }
            count += 1;
        }
    }
    Ok(count)
}

/// Dominant points tρ and ρ + small shifts: e ≠ 0, c finite and defined,
/// evaluation orders agree.
pub fn dominant_finite(form: RealForm) -> Result<usize, String> {
    use hua_core::cfun::*;
    let rs = &realform(form).map_err(|e| e.to_string())?.roots;
    let rho = rs.rho();
    let c = CFunction::new(c_product(rs).unwrap(), rho.clone()).map_err(|e| e.to_string())?;
    let mut points = vec![];
    for t in [ratio(1, 2), rat(1), ratio(3, 2), rat(2), rat(3)] {
        points.push(rho.iter().map(|x| x * &t).collect::<Vec<_>>());
    }
    for i in 0..rs.rank {
        for d in [ratio(1, 3), ratio(-1, 5), ratio(7, 4)] {
            let mut l = rho.clone();
            l[i] += d;
            points.push(l);
        }
    }
    let mut count = 0;
    for l in points {
        if !rs.positive.iter().all(|r| rs.coroot_pairing(&l, &r.vector).is_positive()) {
            continue;
        }
        let e = e_function(rs, &l).map_err(|e| e.to_string())?;
        let v = c.at(&l, &Rat::zero()).map_err(|e| e.to_string())?;
        let direct = c.at_direct(&l, &Rat::zero()).map_err(|e| e.to_string())?;
        let ok = !e.zero
            && e.value.is_finite()
            && e.value != 0.0
            && v.defined
            && v.value.is_some_and(|x| x.is_finite() && close(x, direct, 1e-12));
        if !ok {
            return Err(format!("{form}: λ = {l:?}: e = {e:?}, c = {v:?}, direct = {direct}"));
        }
        count += 1;
    }
    Ok(count)
}

/// All parameter assignments of a classical row with 2 ≤ rank ≤ 6.
pub fn assignments(params: &BTreeMap<String, i64>) -> Vec<BTreeMap<String, i64>> {
    let mut out = vec![BTreeMap::new()];
    for (k, min) in params {
        out = out
            .into_iter()
            .flat_map(|a| {
                (*min..=6).map(move |v| {
                    let mut b = a.clone();
                    b.insert(k.clone(), v);
                    b
                })
            })
            .collect();
    }
    out
}

/// Satake-table degree against the computed one at every node of every
/// classical row with 2 ≤ rank ≤ 6; returns the number of nodes checked.
pub fn degree_checks() -> Result<usize, String> {
    let mut checked = 0;
    for row in satake_table().rows.iter().filter(|r| r.is_classical()) {
        for vals in assignments(&row.params) {
            let Ok(diag) = row.expand(&vals) else { continue };
            if !(2..=6).contains(&diag.nodes.len()) {
                continue;
            }
            for (i, want) in diag.degrees().into_iter().enumerate() {
                let Some(want) = want else { continue };
                let got = diagram_boundary_degree(&diag, i + 1).map_err(|e| e.to_string())?.degree;
                if got as u32 != want {
                    return Err(format!("{} {vals:?} node {}: {got} vs {want}", row.label, i + 1));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}
