//! Cross-checks against values built here from closed forms, without going
//! through the library's own solvers.

use legpro::exactla::rational::{frac, int, unit_vector};
use legpro::exactla::{Matrix, Rational, Vector};
use legpro::legendrian::{stabilizer_algebra, Ambient, CubicForm, PointSampler, SamplerConfig};
use legpro::prolong::{is_prolongation_of, prolongation_space, ProlongationElement};
use legpro::symplectic::{csp_basis, SymplecticSpace};
use num_traits::Zero;

/// Gram matrix in the coordinates (a, x_1..x_{m-1}, y_1..y_{m-1}, b).
fn gram(m: usize) -> Matrix {
    let n = 2 * m;
    let mut g = Matrix::zeros(n, n);
    g[(0, n - 1)] = int(1);
    g[(n - 1, 0)] = int(-1);
    for i in 1..m {
        g[(i, i + m - 1)] = int(1);
        g[(i + m - 1, i)] = int(-1);
    }
    g
}

fn sigma(g: &Matrix, u: &[Rational], v: &[Rational]) -> Rational {
    let gv = g.mul_vec(v);
    u.iter().zip(&gv).map(|(a, b)| a * b).sum()
}

fn naive_rank(rows: &[Vector]) -> usize {
    let mut rows = rows.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if !rows[r][col].is_zero() {
                let f = &rows[r][col] / &pivot;
                for c in col..cols {
                    let d = &f * &rows[rank][c];
                    rows[r][c] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn flatten(maps: &[Matrix]) -> Vector {
    maps.iter().flat_map(|a| a.as_slice().to_vec()).collect()
}

/// δ evaluated straight from the definition, with Ā = G·c, c_i = (2/N) tr A_i.
fn delta_is_zero(g: &Matrix, maps: &[Matrix]) -> bool {
    let n = g.rows();
    let c: Vector = maps.iter().map(|a| a.trace() * frac(2, n as i64)).collect();
    let abar = g.mul_vec(&c);
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            (0..n).all(|k| {
                let v = &maps[i][(k, j)] - &maps[j][(k, i)] - &g[(i, j)] * &abar[k];
                v.is_zero()
            })
        })
    })
}

/// `sp(V) = { -G S : S symmetric }` plus the identity.
fn csp_closed_form(m: usize) -> Vec<Matrix> {
    let n = 2 * m;
    let g = gram(m);
    let mut out = vec![Matrix::identity(n)];
    for i in 0..n {
        for j in i..n {
            let mut s = Matrix::zeros(n, n);
            s[(i, j)] = int(1);
            s[(j, i)] = int(1);
            out.push(g.mul(&s).scale(&int(-1)));
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `A_u = -G Q(u, ., .)` for symmetric cubic tensors Q, plus `A^w` for basis w.
fn prolongation_family(m: usize) -> Vec<Vec<Matrix>> {
    let n = 2 * m;
    let g = gram(m);
    let mut family = Vec::new();
    for p in 0..n {
        for q in p..n {
            for r in q..n {
                let maps = (0..n)
                    .map(|i| {
                        let mut qi = Matrix::zeros(n, n);
                        for j in 0..n {
                            for k in 0..n {
                                let mut idx = [i, j, k];
                                idx.sort_unstable();
                                if idx == [p, q, r] {
                                    qi[(j, k)] = int(1);
                                }
                            }
                        }
                        g.mul(&qi).scale(&int(-1))
                    })
                    .collect();
                family.push(maps);
            }
        }
    }
    for w in 0..n {
        let w = unit_vector(n, w);
        let maps = (0..n)
            .map(|i| {
                let ei = unit_vector(n, i);
                let cols: Vec<Vector> = (0..n)
                    .map(|j| {
                        let ej = unit_vector(n, j);
                        (0..n)
                            .map(|k| {
                                &sigma(&g, &w, &ei) * &ej[k]
                                    + &sigma(&g, &w, &ej) * &ei[k]
                                    + &sigma(&g, &ei, &ej) * &w[k]
                            })
                            .collect()
                    })
                    .collect();
                Matrix::from_columns(n, &cols)
            })
            .collect();
        family.push(maps);
    }
    family
}

#[test]
fn library_gram_matches_closed_form() {
    for m in 1..=4 {
        assert_eq!(SymplecticSpace::standard(m).unwrap().gram(), &gram(m));
    }
}

#[test]
fn csp_matches_symmetric_parametrization() {
    for m in 1..=4 {
        let closed = csp_closed_form(m);
        let flat: Vec<Vector> = closed.iter().map(|a| a.as_slice().to_vec()).collect();
        assert_eq!(naive_rank(&flat), m * (2 * m + 1) + 1);
        let g = csp_basis(&SymplecticSpace::standard(m).unwrap());
        assert_eq!(g.dim(), closed.len());
        assert!(closed.iter().all(|a| g.contains(a)));
    }
}

#[test]
fn csp_prolongation_equals_explicit_family() {
    for m in 1..=3 {
        let n = 2 * m;
        let g = gram(m);
        let family = prolongation_family(m);
        let expected = binomial(n + 2, 3) + n;
        assert_eq!(family.len(), expected);
        assert!(family.iter().all(|maps| delta_is_zero(&g, maps)));
        let flat: Vec<Vector> = family.iter().map(|maps| flatten(maps)).collect();
        assert_eq!(naive_rank(&flat), expected);

        let space = SymplecticSpace::standard(m).unwrap();
        let csp = csp_basis(&space);
        let computed = prolongation_space(&csp).unwrap();
        assert_eq!(computed.dim(), expected, "m = {m}");
        for maps in family {
            assert!(is_prolongation_of(
                &ProlongationElement::from_maps(&space, maps),
                &csp
            ));
        }
        for a in &computed.basis {
            assert!(delta_is_zero(&g, a.maps()));
        }
    }
}

/// ẑ(x) = (1, x, ∇P, -P) and its partials, from the monomial expansion.
fn cone_frame(terms: &[(usize, usize, usize, i64)], n: usize, x: &[Rational]) -> Vec<Vector> {
    let mut p = Rational::zero();
    let mut grad = vec![Rational::zero(); n];
    let mut hess = vec![vec![Rational::zero(); n]; n];
    for &(i, j, k, c) in terms {
        let c = int(c);
        let idx = [i, j, k];
        p += &c * &x[i] * &x[j] * &x[k];
        for a in 0..3 {
            let others: Vec<usize> = (0..3).filter(|&b| b != a).map(|b| idx[b]).collect();
            grad[idx[a]] += &c * &x[others[0]] * &x[others[1]];
            for b in 0..3 {
                if b != a {
                    let last = idx[3 - a - b];
                    hess[idx[a]][idx[b]] += &c * &x[last];
                }
            }
        }
    }
    let mut frame = Vec::new();
    let mut z = vec![int(1)];
    z.extend(x.iter().cloned());
    z.extend(grad.iter().cloned());
    z.push(-p);
    frame.push(z);
    for i in 0..n {
        let mut d = vec![Rational::zero()];
        d.extend((0..n).map(|k| if k == i { int(1) } else { int(0) }));
        d.extend(hess[i].iter().cloned());
        d.push(-grad[i].clone());
        frame.push(d);
    }
    frame
}

fn stabilizer_is_tangent(terms: &[(usize, usize, usize, i64)], n: usize, expected_dim: usize) {
    let p = CubicForm::from_terms(n, terms).unwrap();
    let stab = stabilizer_algebra(&p, Ambient::Csp, &SamplerConfig::with_seed(99)).unwrap();
    assert_eq!(stab.algebra.dim(), expected_dim);
    let mut sampler = PointSampler::new(n, 4242, 5);
    for _ in 0..8 {
        let x = sampler.rational_point();
        let frame = cone_frame(terms, n, &x);
        let base = naive_rank(&frame);
        assert_eq!(base, n + 1);
        for b in stab.algebra.basis() {
            let mut rows = frame.clone();
            rows.push(b.mul_vec(&frame[0]));
            assert_eq!(
                naive_rank(&rows),
                base,
                "stabilizer element moves ẑ off the tangent space"
            );
        }
    }
}

#[test]
fn twisted_cubic_stabilizer_is_gl2() {
    // sl(2) acting on binary cubics plus the center.
    stabilizer_is_tangent(&[(0, 0, 0, 1)], 1, 4);
}

#[test]
fn xyz_stabilizer_is_three_sl2_plus_center() {
    stabilizer_is_tangent(&[(0, 1, 2, 1)], 3, 3 * 3 + 1);
}

#[test]
fn xyz_prolongation_dimension() {
    let p = CubicForm::from_terms(3, &[(0, 1, 2, 1)]).unwrap();
    let stab = stabilizer_algebra(&p, Ambient::Csp, &SamplerConfig::default()).unwrap();
    let prol = prolongation_space(&stab.algebra).unwrap();
    assert_eq!(prol.dim(), 8);
    let g = gram(4);
    assert!(prol.basis.iter().all(|a| delta_is_zero(&g, a.maps())));
}

#[test]
fn fermat_cubic_prolongation_is_a_line() {
    let p = CubicForm::from_terms(2, &[(0, 0, 0, 1), (1, 1, 1, 1)]).unwrap();
    let stab = stabilizer_algebra(&p, Ambient::Csp, &SamplerConfig::default()).unwrap();
    assert_eq!(stab.algebra.dim(), 4);
    let prol = prolongation_space(&stab.algebra).unwrap();
    assert_eq!(prol.dim(), 1);
    let a = &prol.basis[0];
    assert!(delta_is_zero(&gram(3), a.maps()));
    assert!(!a.abar_is_zero());
}
