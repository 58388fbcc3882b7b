//! The check catalog. Ids follow the numbering of the results they test;
//! `statement` says what each one asserts.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use super::{gen, CheckKind, CheckSpec, Trial};
use crate::error::Result;
use crate::linalg::{numerical_radius, Matrix};
use crate::scalar::{cis, cplx, real, C};
use crate::structured::{
    block_diag, block_offdiag, cross_diag, cross_with_center, lcirc, lcirc_i, scirc, slcirc,
    slcirc_i, BlockMatrix,
};

type Rel = super::Pairs;

const D123: &[usize] = &[1, 2, 3];
const N_ALL: &[usize] = &[2, 3, 4, 5, 6];
const N_EVEN: &[usize] = &[2, 4, 6];
const N_ODD: &[usize] = &[3, 5];

const fn eq(id: &'static str, statement: &'static str, blocks: &'static [usize], run: fn(&mut Trial) -> Rel) -> CheckSpec {
    CheckSpec {
        id,
        kind: CheckKind::Equality,
        statement,
        dims: D123,
        blocks,
        singular_ok: true,
        run,
    }
}

const fn le(id: &'static str, statement: &'static str, blocks: &'static [usize], run: fn(&mut Trial) -> Rel) -> CheckSpec {
    CheckSpec {
        kind: CheckKind::UpperBound,
        ..eq(id, statement, blocks, run)
    }
}

const fn st(id: &'static str, statement: &'static str, blocks: &'static [usize], run: fn(&mut Trial) -> Rel) -> CheckSpec {
    CheckSpec {
        kind: CheckKind::Structural,
        ..eq(id, statement, blocks, run)
    }
}

static CATALOG: &[CheckSpec] = &[
    // A-calculus
    st("sharp-triple", "((T#)#)# = T#", &[1], sharp_triple),
    st("sharp-double", "(T#)# = P T P", &[1], sharp_double),
    st("sharp-product", "(TS)# = S# T#", &[1], sharp_product),
    st("sharp-sum", "(T + S)# = T# + S#", &[1], sharp_sum),
    eq("eq1.1", "||T# T||_A = ||T T#||_A = ||T#||_A^2 = ||T||_A^2", &[1], eq1_1),
    le("eq1.3", "||T||_A / 2 <= w_A(T) <= ||T||_A", &[1], eq1_3),
    eq("eq1.4", "w_A(T#) = w_A(T)", &[1], eq1_4),
    eq("eq1.5", "w_A(T) = ||T||_A / 2 when T^2 = 0", &[1], eq1_5),
    eq("lemma1.6", "r_A(S^k) = r_A(S)^k for k = 2, 3, 4", &[1], lemma1_6),
    // two-by-two blocks
    eq("lemma1.1-i", "w(diag(T1, T2)) = max w(Ti)", &[2], lemma1_1_i),
    eq("lemma1.1-ii", "w([[O, T1], [T2, O]]) = w([[O, T2], [T1, O]])", &[2], lemma1_1_ii),
    eq("lemma1.1-iii", "w([[O, T1], [e^{it} T2, O]]) = w([[O, T1], [T2, O]])", &[2], lemma1_1_iii),
    eq("lemma1.1-iv", "w([[T1, T2], [T2, T1]]) = max{w(T1 + T2), w(T1 - T2)}", &[2], lemma1_1_iv),
    eq("lemma1.2", "w([[T2, -T1], [T1, T2]]) = max{w(T1 + iT2), w(T1 - iT2)}", &[2], lemma1_2),
    st("lemma1.3", "block A-adjoint is the block transpose of per-block A-adjoints", &[2, 3, 4], lemma1_3),
    eq("lemma1.4", "w(diag(T1..Tn)) = max w(Ti)", N_ALL, lemma1_4),
    le("lemma1.5-even", "w(offdiag(A1..An)) <= sum ||Ai|| / 2, n even", N_EVEN, lemma1_5),
    le("lemma1.5-odd", "w(offdiag(A1..An)) <= w(A_c) + sum_{i != c} ||Ai|| / 2, n odd", N_ODD, lemma1_5),
    le("lemma1.7", "w(S) <= w([s_ij]) with s_ii = w(S_ii), s_ij = w([[O, S_ij], [S_ji, O]])", &[2, 3, 4], lemma1_7),
    // cross-diagonal matrices
    eq("thm2.1-even", "cross-diagonal, n even: max over the printed 2x2 pair blocks", N_EVEN, cross_printed),
    eq("thm2.1-odd-odd", "cross-diagonal, n odd with (n+1)/2 odd: pair blocks and centre", &[5], cross_printed),
    eq("thm2.1-odd-even", "cross-diagonal, n odd with (n+1)/2 even: pair blocks and centre", &[3], cross_printed),
    eq("rem2.1-i", "cross-diagonal with zero diagonal: max over anti-diagonal pairs and centre", N_ALL, rem2_1_i),
    eq("rem2.1-ii", "cross-diagonal with zero anti-diagonal: max w(Ti)", N_ALL, rem2_1_ii),
    eq("cor2.2", "cross-diagonal with mirrored blocks: max{w(Tk + Sk), w(Tk - Sk)} and centre", N_ALL, cor2_2),
    eq("cor2.2-offdiag", "offdiag(S1..Sn) with mirrored blocks: max w(Sk)", N_ALL, cor2_2_offdiag),
    eq("rem2.2-even", "constant cross T/S, n even: max{w(T + S), w(T - S)}", N_EVEN, |t| rem2_2(t, Centre::None)),
    eq("rem2.2-odd-T", "constant cross T/S, centre T: max{w(T + S), w(T), w(T - S)}", N_ODD, |t| rem2_2(t, Centre::T)),
    eq("rem2.2-odd-S", "constant cross T/S, centre S: max{w(T + S), w(S), w(T - S)}", N_ODD, |t| rem2_2(t, Centre::S)),
    eq("rem2.3", "constant cross with T = S: 2 w(T)", N_ALL, rem2_3),
    eq("rem2.3-offdiag", "offdiag(S, ..., S): w(S)", N_ALL, rem2_3_offdiag),
    eq("thm2.5-even", "R diagonal, T anti-diagonal, S elsewhere, n even: max{w(R+T+(n-2)S), w(R+T-2S), w(R-T)}", &[4, 6], thm2_5),
    CheckSpec {
        dims: &[1],
        ..st("thm2.5-odd-gap", "at n = 3 the even-order formula under- and over-estimates on two scalar instances", &[3], thm2_5_gap)
    },
    // left circulants
    eq("thm3.1", "lcirc: max{w(D_0), w(D_{n/2}), w([[O, D_{n-r}], [D_r, O]])}", N_ALL, thm3_1),
    eq("rem3.1", "w(lcirc(T1..Tn)) = w(lcirc(Tn..T1))", N_ALL, |t| reversal(t, lcirc)),
    le("cor3.2-even", "w(lcirc) <= w(D_0) + max_j w(D_j), n even", N_EVEN, cor3_2_literal),
    le("cor3.2-odd", "w(lcirc) <= w(D_0) + max_j w(D_j), n odd", N_ODD, cor3_2_literal),
    le("cor3.2-pairs", "w(lcirc) <= max{w(D_0), w(D_{n/2}), max_j (||D_j|| + ||D_{n-j}||) / 2}", N_ALL, cor3_2_pairs),
    eq("thm3.3", "slcirc: max over anti-diagonal pairs of the skew sums E_j", N_ALL, thm3_3),
    eq("rem3.3", "w(slcirc(T1..Tn)) = w(slcirc(Tn..T1))", N_ALL, |t| reversal(t, slcirc)),
    le("cor3.4-even", "w(slcirc) <= (n/2) sum ||Ti||, n even", N_EVEN, cor3_4),
    le("cor3.4-odd", "w(slcirc) <= sum w(Ti) + ((n-1)/2) sum ||Ti||, n odd", N_ODD, cor3_4),
    le("cor3.4-odd-mid", "w(slcirc) <= w(E_c) + ((n-1)/2) sum ||Ti||, n odd", N_ODD, cor3_4_mid),
    eq("rem3.4", "w(scirc(T, sT, ..., s^{n-1}T)) = n w(T), s = e^{i pi/n}", N_ALL, rem3_4),
    le("rem3.4-chain", "w(slcirc(T, sT, ...)) <= w(scirc(T, sT, ...))", N_ALL, rem3_4_chain),
    eq("rem3.4-nilpotent", "w(slcirc(T, sT, ...)) = w(scirc(T, sT, ...)) when T^2 = 0", N_ALL, rem3_4_nilpotent),
    // imaginary left circulants
    le("prop4.1", "w(lcirc_i(T1, T2)) <= w(T1) + w(T2)", &[2], |t| small_lcirc_i(t, false)),
    le("cor4.1", "w(slcirc_i(T1, T2)) <= w(T1) + w(T2)", &[2], |t| small_lcirc_i(t, true)),
    le("prop4.2", "w(lcirc_i(T1, T2, T3)) <= w(T3) + max{w(T1), w(T2)} + (||T1 - T2|| + ||T1 + T2||) / sqrt 2", &[3], |t| three(t, false, FRAC_1_SQRT_2)),
    le("prop4.2-stated", "the same with coefficient sqrt 2", &[3], |t| three(t, false, SQRT_2)),
    le("cor4.2", "w(slcirc_i(T1, T2, T3)) <= w(T3) + max{w(T1), w(T2)} + (||T1 - T2|| + ||T1 + T2||) / sqrt 2", &[3], |t| three(t, true, FRAC_1_SQRT_2)),
    le("prop4.3", "w(lcirc_i(T1..T4)) <= w(T4) + 2 max{w(T1), w(T3)} + pair terms", &[4], |t| four(t, false)),
    le("cor4.3", "w(slcirc_i(T1..T4)) <= w(T4) + 2 max{w(T1), w(T3)} + pair terms", &[4], |t| four(t, true)),
    le("prop4.5", "w(lcirc_i(T1..T5)) <= w(T5) + max{w(T2), w(T3)} + max{w(T1), w(T4)} + pair terms + sqrt(w(T4)^2 + w(T2)^2)", &[5], prop4_5),
    // general block matrices
    le("lemma-arrow", "first row and column: (w(S11) + sqrt(w(S11)^2 + 4 sum w([[O, S1k], [Sk1, O]])^2)) / 2", N_ALL, |t| arrow(t, Arrow::General)),
    le("lemma-arrow-sym", "symmetric first row and column: (w(S11) + sqrt(w(S11)^2 + 4 sum w(S1k)^2)) / 2", N_ALL, |t| arrow(t, Arrow::Symmetric)),
    le("lemma-arrow-zero", "symmetric first row and column, S11 = O: sqrt(sum w(S1k)^2)", N_ALL, |t| arrow(t, Arrow::ZeroCorner)),
    le("rem-first-row", "first row only: (w(S11) + sqrt(w(S11)^2 + sum ||S1k||^2)) / 2", N_ALL, |t| arrow(t, Arrow::FirstRow)),
    le("thm-general-nn", "sum_i (w(Sii) + sqrt(w(Sii)^2 + 4 sum_{j>i} w([[O, Sij], [Sji, O]])^2)) / 2", &[2, 3, 4, 5], |t| general(t, General::Full)),
    le("cor-general-sym", "symmetric: sum_i (w(Sii) + sqrt(w(Sii)^2 + 4 sum_{j>i} w(Sij)^2)) / 2", &[2, 3, 4, 5], |t| general(t, General::Symmetric)),
    le("cor-general-tri", "upper triangular: sum_i (w(Sii) + sqrt(w(Sii)^2 + sum_{j>i} ||Sij||^2)) / 2", &[2, 3, 4, 5], |t| general(t, General::Upper)),
    le("lemma4.8", "w([[O, T1, O], [T1, O, T2], [O, T2, O]]) <= sqrt(w(T1)^2 + w(T2)^2)", &[3], lemma4_8),
];

/// Every check, in the fixed order `all` runs them.
pub fn catalog() -> &'static [CheckSpec] {
    CATALOG
}

pub fn find_check(id: &str) -> Option<&'static CheckSpec> {
    CATALOG.iter().find(|c| c.id == id)
}

fn rel_residual(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    a.max_diff(b) / a.max_abs().max(b.max_abs()).max(1.0)
}

fn sum(a: &Matrix<f64>, b: &Matrix<f64>) -> Matrix<f64> {
    a + b
}

fn diff(a: &Matrix<f64>, b: &Matrix<f64>) -> Matrix<f64> {
    a - b
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn i_times(t: &Matrix<f64>) -> Matrix<f64> {
    t.scale(cplx(0.0, 1.0))
}

fn square(t: &mut Trial, n: usize, mut f: impl FnMut(&mut Trial, usize, usize) -> Matrix<f64>) -> Result<BlockMatrix<f64>> {
    let d = t.d;
    let mut blocks = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            blocks.push(f(t, i, j));
        }
    }
    BlockMatrix::from_fn(n, d, |i, j| blocks[i * n + j].clone())
}

// ---- A-calculus ----

fn sharp_triple(t: &mut Trial) -> Rel {
    let x = t.op();
    let s1 = t.ctx.a_adjoint(&x)?;
    let s3 = t.ctx.a_adjoint(&t.ctx.a_adjoint(&s1)?)?;
    Ok(vec![(rel_residual(&s3, &s1), 0.0)])
}

fn sharp_double(t: &mut Trial) -> Rel {
    let x = t.op();
    let s2 = t.ctx.a_adjoint(&t.ctx.a_adjoint(&x)?)?;
    let p = t.ctx.range_projection();
    Ok(vec![(rel_residual(&s2, &(&(p * &x) * p)), 0.0)])
}

fn sharp_product(t: &mut Trial) -> Rel {
    let (x, y) = (t.op(), t.op());
    let lhs = t.ctx.a_adjoint(&(&x * &y))?;
    let rhs = &t.ctx.a_adjoint(&y)? * &t.ctx.a_adjoint(&x)?;
    Ok(vec![(rel_residual(&lhs, &rhs), 0.0)])
}

fn sharp_sum(t: &mut Trial) -> Rel {
    let (x, y) = (t.op(), t.op());
    let lhs = t.ctx.a_adjoint(&(&x + &y))?;
    let rhs = &t.ctx.a_adjoint(&x)? + &t.ctx.a_adjoint(&y)?;
    Ok(vec![(rel_residual(&lhs, &rhs), 0.0)])
}

fn eq1_1(t: &mut Trial) -> Rel {
    let x = t.op();
    let s = t.ctx.a_adjoint(&x)?;
    let nx = t.norm(&x)?;
    let sq = nx * nx;
    Ok(vec![
        (t.norm(&(&s * &x))?, sq),
        (t.norm(&(&x * &s))?, sq),
        (t.norm(&s)?.powi(2), sq),
    ])
}

fn eq1_3(t: &mut Trial) -> Rel {
    let x = t.op();
    let (w, nx) = (t.w(&x)?, t.norm(&x)?);
    Ok(vec![(nx / 2.0, w), (w, nx)])
}

fn eq1_4(t: &mut Trial) -> Rel {
    let x = t.op();
    let s = t.ctx.a_adjoint(&x)?;
    Ok(vec![(t.w(&s)?, t.w(&x)?)])
}

fn eq1_5(t: &mut Trial) -> Rel {
    let x = gen::random_square_zero(&t.ctx, &mut t.rng);
    Ok(vec![(t.w(&x)?, t.norm(&x)? / 2.0)])
}

fn lemma1_6(t: &mut Trial) -> Rel {
    let x = t.op();
    let r = t.ctx.a_spectral_radius(&x)?;
    let mut out = Vec::new();
    for k in 2..=4 {
        out.push((t.ctx.a_spectral_radius(&x.pow(k)?)?, r.powi(k as i32)));
    }
    Ok(out)
}

// ---- two-by-two blocks ----

fn lemma1_1_i(t: &mut Trial) -> Rel {
    let (a, b) = (t.op(), t.op());
    let z = t.zero();
    Ok(vec![(t.w2(&a, &z, &z, &b)?, t.w(&a)?.max(t.w(&b)?))])
}

fn lemma1_1_ii(t: &mut Trial) -> Rel {
    let (a, b) = (t.op(), t.op());
    Ok(vec![(t.w_off(&a, &b)?, t.w_off(&b, &a)?)])
}

fn lemma1_1_iii(t: &mut Trial) -> Rel {
    let (a, b) = (t.op(), t.op());
    let phase = t.uniform(0.0, 2.0 * PI);
    Ok(vec![(t.w_off(&a, &b.scale(cis(phase)))?, t.w_off(&a, &b)?)])
}

fn lemma1_1_iv(t: &mut Trial) -> Rel {
    let (a, b) = (t.op(), t.op());
    let rhs = t.w(&sum(&a, &b))?.max(t.w(&diff(&a, &b))?);
    Ok(vec![(t.w2(&a, &b, &b, &a)?, rhs)])
}

fn lemma1_2(t: &mut Trial) -> Rel {
    let (a, b) = (t.op(), t.op());
    let ib = i_times(&b);
    let rhs = t.w(&sum(&a, &ib))?.max(t.w(&diff(&a, &ib))?);
    Ok(vec![(t.w2(&b, &-&a, &a, &b)?, rhs)])
}

fn lemma1_3(t: &mut Trial) -> Rel {
    let n = t.n;
    let m = square(t, n, |t, _, _| t.op())?;
    let blockwise = m.a_adjoint(&t.ctx)?.flatten();
    let direct = t.ctx.inflate(n).a_adjoint(&m.flatten())?;
    Ok(vec![(rel_residual(&blockwise, &direct), 0.0)])
}

fn lemma1_4(t: &mut Trial) -> Rel {
    let ts = t.ops(t.n);
    let rhs = max_of(ts.iter().map(|x| t.w(x)).collect::<Result<Vec<_>>>()?);
    Ok(vec![(t.wb(&block_diag(&ts)?)?, rhs)])
}

fn lemma1_5(t: &mut Trial) -> Rel {
    let n = t.n;
    let ts = t.ops(n);
    let lhs = t.wb(&block_offdiag(&ts)?)?;
    let mut rhs = 0.0;
    for (i, x) in ts.iter().enumerate() {
        if n % 2 == 1 && i == n / 2 {
            rhs += t.w(x)?;
        } else {
            rhs += t.norm(x)? / 2.0;
        }
    }
    Ok(vec![(lhs, rhs)])
}

fn lemma1_7(t: &mut Trial) -> Rel {
    let n = t.n;
    let m = square(t, n, |t, _, _| t.op())?;
    let mut s = Matrix::<f64>::zeros(n, n);
    for i in 0..n {
        s[(i, i)] = real(t.w(m.block(i, i))?);
        for j in i + 1..n {
            let v = t.w_off(m.block(i, j), m.block(j, i))?;
            s[(i, j)] = real(v);
            s[(j, i)] = real(v);
        }
    }
    let rhs = numerical_radius(&s, 1e-12)?.value;
    Ok(vec![(t.wb(&m)?, rhs)])
}

// ---- cross-diagonal ----

/// A 1-based pairing of a cross-diagonal matrix: `Pair(a, b)` is the block
/// `[[T_a, S_a], [S_b, T_b]]`, `Centre(c)` the lone middle block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossPair {
    Pair(usize, usize),
    Centre(usize),
}

/// The pair blocks listed for each parity class, index ranges as printed:
/// `i = 1..n/2` with `(n-2i+1, 2i)` for even `n`; for odd `n` a lower range
/// of the same form, the centre, then an upper range `(n-2i+2, 2i-1)`.
pub fn printed_cross_pairs(n: usize) -> Vec<CrossPair> {
    use CrossPair::*;
    let lower = |i: usize| Pair(n + 1 - 2 * i, 2 * i);
    let upper = |i: usize| Pair(n + 2 - 2 * i, 2 * i - 1);
    let c = n.div_ceil(2);
    if n.is_multiple_of(2) {
        (1..=n / 2).map(lower).collect()
    } else if c % 2 == 1 {
        let mut v: Vec<_> = (1..=(n - 1) / 4).map(lower).collect();
        v.push(Centre(c));
        v.extend(((n + 7) / 4..=c).map(upper));
        v
    } else {
        let mut v: Vec<_> = (1..=(n - 3) / 4).map(lower).collect();
        v.push(Centre(c));
        v.extend(((n + 5) / 4..=c).map(upper));
        v
    }
}

fn random_cross(t: &mut Trial) -> (Vec<Matrix<f64>>, Vec<Matrix<f64>>) {
    let n = t.n;
    let ts = t.ops(n);
    let mut ss = t.ops(n);
    if n % 2 == 1 {
        ss[n / 2] = ts[n / 2].clone();
    }
    (ts, ss)
}

fn cross_printed(t: &mut Trial) -> Rel {
    let (ts, ss) = random_cross(t);
    let lhs = t.wb(&cross_diag(&ts, &ss)?)?;
    let mut rhs: f64 = 0.0;
    for p in printed_cross_pairs(t.n) {
        rhs = rhs.max(match p {
            CrossPair::Pair(a, b) => t.w2(&ts[a - 1], &ss[a - 1], &ss[b - 1], &ts[b - 1])?,
            CrossPair::Centre(c) => t.w(&ts[c - 1])?,
        });
    }
    Ok(vec![(lhs, rhs)])
}

/// `(k, n-1-k)` for `k < n/2`, 0-based.
fn mirror_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n / 2).map(move |k| (k, n - 1 - k))
}

fn rem2_1_i(t: &mut Trial) -> Rel {
    let n = t.n;
    let ss = t.ops(n);
    let mut ts = vec![t.zero(); n];
    if n % 2 == 1 {
        ts[n / 2] = ss[n / 2].clone();
    }
    let lhs = t.wb(&cross_diag(&ts, &ss)?)?;
    let mut rhs: f64 = 0.0;
    for (a, b) in mirror_pairs(n) {
        rhs = rhs.max(t.w_off(&ss[a], &ss[b])?);
    }
    if n % 2 == 1 {
        rhs = rhs.max(t.w(&ss[n / 2])?);
    }
    Ok(vec![(lhs, rhs)])
}

fn rem2_1_ii(t: &mut Trial) -> Rel {
    let n = t.n;
    let ts = t.ops(n);
    let mut ss = vec![t.zero(); n];
    if n % 2 == 1 {
        ss[n / 2] = ts[n / 2].clone();
    }
    let lhs = t.wb(&cross_diag(&ts, &ss)?)?;
    let rhs = max_of(ts.iter().map(|x| t.w(x)).collect::<Result<Vec<_>>>()?);
    Ok(vec![(lhs, rhs)])
}

fn cor2_2(t: &mut Trial) -> Rel {
    let n = t.n;
    let (mut ts, mut ss) = random_cross(t);
    for (a, b) in mirror_pairs(n) {
        ts[b] = ts[a].clone();
        ss[b] = ss[a].clone();
    }
    let lhs = t.wb(&cross_diag(&ts, &ss)?)?;
    let mut rhs: f64 = 0.0;
    for (a, _) in mirror_pairs(n) {
        rhs = rhs.max(t.w(&sum(&ts[a], &ss[a]))?).max(t.w(&diff(&ts[a], &ss[a]))?);
    }
    if n % 2 == 1 {
        rhs = rhs.max(t.w(&ts[n / 2])?);
    }
    Ok(vec![(lhs, rhs)])
}

fn cor2_2_offdiag(t: &mut Trial) -> Rel {
    let n = t.n;
    let mut ss = t.ops(n);
    for (a, b) in mirror_pairs(n) {
        ss[b] = ss[a].clone();
    }
    let lhs = t.wb(&block_offdiag(&ss)?)?;
    let rhs = max_of(ss.iter().map(|x| t.w(x)).collect::<Result<Vec<_>>>()?);
    Ok(vec![(lhs, rhs)])
}

#[derive(Clone, Copy)]
enum Centre {
    None,
    T,
    S,
}

fn rem2_2(t: &mut Trial, centre: Centre) -> Rel {
    let n = t.n;
    let (x, y) = (t.op(), t.op());
    let ts = vec![x.clone(); n];
    let ss = vec![y.clone(); n];
    let c = match centre {
        Centre::S => Some(&y),
        _ => None,
    };
    let lhs = t.wb(&cross_with_center(&ts, &ss, c))?;
    let mut rhs = t.w(&sum(&x, &y))?.max(t.w(&diff(&x, &y))?);
    match centre {
        Centre::None => {}
        Centre::T => rhs = rhs.max(t.w(&x)?),
        Centre::S => rhs = rhs.max(t.w(&y)?),
    }
    Ok(vec![(lhs, rhs)])
}

fn rem2_3(t: &mut Trial) -> Rel {
    let x = t.op();
    let ts = vec![x.clone(); t.n];
    let lhs = t.wb(&cross_diag(&ts, &ts)?)?;
    Ok(vec![(lhs, 2.0 * t.w(&x)?)])
}

fn rem2_3_offdiag(t: &mut Trial) -> Rel {
    let x = t.op();
    let lhs = t.wb(&block_offdiag(&vec![x.clone(); t.n])?)?;
    Ok(vec![(lhs, t.w(&x)?)])
}

/// `R` on the diagonal, `T` on the anti-diagonal, `S` elsewhere.
fn rst_matrix(n: usize, r: &Matrix<f64>, s: &Matrix<f64>, tt: &Matrix<f64>) -> Result<BlockMatrix<f64>> {
    BlockMatrix::from_fn(n, r.rows(), |i, j| {
        if i == j {
            r.clone()
        } else if i + j + 1 == n {
            tt.clone()
        } else {
            s.clone()
        }
    })
}

fn thm2_5(t: &mut Trial) -> Rel {
    let n = t.n;
    let (r, s, x) = (t.op(), t.op(), t.op());
    let lhs = t.wb(&rst_matrix(n, &r, &s, &x)?)?;
    let rt = sum(&r, &x);
    let rhs = t
        .w(&sum(&rt, &s.scale_real((n - 2) as f64)))?
        .max(t.w(&diff(&rt, &s.scale_real(2.0)))?)
        .max(t.w(&diff(&r, &x))?);
    Ok(vec![(lhs, rhs)])
}

/// Scalar instances `(R, S, T) = (2, 3, 2)` and `(3, 2, 3)` at `n = 3`. The
/// residual is negative exactly when the first radius exceeds the formula
/// and the second falls below it.
fn thm2_5_gap(_: &mut Trial) -> Rel {
    let value = |r: f64, s: f64, x: f64| -> Result<(f64, f64)> {
        let sc = |v: f64| Matrix::<f64>::from_real_rows(&[&[v]]);
        let m = rst_matrix(3, &sc(r), &sc(s), &sc(x))?;
        let lhs = numerical_radius(&m.flatten(), 1e-12)?.value;
        let rhs = (r + x + s).abs().max((r + x - 2.0 * s).abs()).max((r - x).abs());
        Ok((lhs, rhs))
    };
    let (l1, r1) = value(2.0, 3.0, 2.0)?;
    let (l2, r2) = value(3.0, 2.0, 3.0)?;
    Ok(vec![((r1 - l1).max(l2 - r2), 0.0)])
}

// ---- left circulants ----

fn omega_pow(k: i64, n: usize) -> C<f64> {
    cis(2.0 * PI * (k.rem_euclid(n as i64) as f64) / n as f64)
}

/// `D_j = sum_i omega^{j(1-i)} T_i`, 1-based `i`.
fn dft_sums(ts: &[Matrix<f64>]) -> Vec<Matrix<f64>> {
    let n = ts.len();
    (0..n)
        .map(|j| {
            let mut acc = Matrix::zeros(ts[0].rows(), ts[0].rows());
            for (i0, x) in ts.iter().enumerate() {
                acc += &x.scale(omega_pow(-((j * i0) as i64), n));
            }
            acc
        })
        .collect()
}

/// `E_j = sum_i (sigma omega^j)^{i+1} T_i`, 1-based `i`, `sigma = e^{i pi/n}`.
fn skew_sums(ts: &[Matrix<f64>]) -> Vec<Matrix<f64>> {
    let n = ts.len();
    (0..n)
        .map(|j| {
            let mut acc = Matrix::zeros(ts[0].rows(), ts[0].rows());
            for (i0, x) in ts.iter().enumerate() {
                // arg of (sigma omega^j)^{i+1} is (2j + 1)(i + 1) pi / n
                let e = ((2 * j + 1) * (i0 + 2)) % (2 * n);
                acc += &x.scale(cis(PI * e as f64 / n as f64));
            }
            acc
        })
        .collect()
}

fn thm3_1(t: &mut Trial) -> Rel {
    let n = t.n;
    let ts = t.ops(n);
    let lhs = t.wb(&lcirc(&ts)?)?;
    let ds = dft_sums(&ts);
    let mut rhs = t.w(&ds[0])?;
    if n.is_multiple_of(2) {
        rhs = rhs.max(t.w(&ds[n / 2])?);
    }
    for r in 1..n.div_ceil(2) {
        rhs = rhs.max(t.w_off(&ds[n - r], &ds[r])?);
    }
    Ok(vec![(lhs, rhs)])
}

fn reversal(t: &mut Trial, make: fn(&[Matrix<f64>]) -> Result<BlockMatrix<f64>>) -> Rel {
    let ts = t.ops(t.n);
    let rev: Vec<_> = ts.iter().rev().cloned().collect();
    Ok(vec![(t.wb(&make(&ts)?)?, t.wb(&make(&rev)?)?)])
}

fn cor3_2_literal(t: &mut Trial) -> Rel {
    let n = t.n;
    let ts = t.ops(n);
    let lhs = t.wb(&lcirc(&ts)?)?;
    let ds = dft_sums(&ts);
    let mut top: f64 = 0.0;
    for dj in &ds[1..] {
        top = top.max(t.w(dj)?);
    }
    Ok(vec![(lhs, t.w(&ds[0])? + top)])
}

fn cor3_2_pairs(t: &mut Trial) -> Rel {
    let n = t.n;
    let ts = t.ops(n);
    let lhs = t.wb(&lcirc(&ts)?)?;
    let ds = dft_sums(&ts);
    let mut rhs = t.w(&ds[0])?;
    if n.is_multiple_of(2) {
        rhs = rhs.max(t.w(&ds[n / 2])?);
    }
    for r in 1..n.div_ceil(2) {
        rhs = rhs.max((t.norm(&ds[r])? + t.norm(&ds[n - r])?) / 2.0);
    }
    Ok(vec![(lhs, rhs)])
}

fn thm3_3(t: &mut Trial) -> Rel {
    let n = t.n;
    let ts = t.ops(n);
    let lhs = t.wb(&slcirc(&ts)?)?;
    let es = skew_sums(&ts);
    let mut rhs: f64 = 0.0;
    for (a, b) in mirror_pairs(n) {
        rhs = rhs.max(t.w_off(&es[a], &es[b])?);
    }
    if n % 2 == 1 {
        rhs = rhs.max(t.w(&es[n / 2])?);
    }
    Ok(vec![(lhs, rhs)])
}

fn norm_sum(t: &Trial, ts: &[Matrix<f64>]) -> Result<f64> {
    ts.iter().map(|x| t.norm(x)).sum()
}

fn cor3_4(t: &mut Trial) -> Rel {
    let n = t.n;
    let ts = t.ops(n);
    let lhs = t.wb(&slcirc(&ts)?)?;
    let norms = norm_sum(t, &ts)?;
    let rhs = if n.is_multiple_of(2) {
        n as f64 / 2.0 * norms
    } else {
        ts.iter().map(|x| t.w(x)).sum::<Result<f64>>()? + (n - 1) as f64 / 2.0 * norms
    };
    Ok(vec![(lhs, rhs)])
}

fn cor3_4_mid(t: &mut Trial) -> Rel {
    let n = t.n;
    let ts = t.ops(n);
    let lhs = t.wb(&slcirc(&ts)?)?;
    let es = skew_sums(&ts);
    let rhs = t.w(&es[n / 2])? + (n - 1) as f64 / 2.0 * norm_sum(t, &ts)?;
    Ok(vec![(lhs, rhs)])
}

/// `(T, sT, ..., s^{n-1} T)` with `s = e^{i pi/n}`.
fn phase_family(x: &Matrix<f64>, n: usize) -> Vec<Matrix<f64>> {
    (0..n).map(|k| x.scale(cis(PI * k as f64 / n as f64))).collect()
}

fn rem3_4(t: &mut Trial) -> Rel {
    let x = t.op();
    let lhs = t.wb(&scirc(&phase_family(&x, t.n))?)?;
    Ok(vec![(lhs, t.n as f64 * t.w(&x)?)])
}

fn rem3_4_chain(t: &mut Trial) -> Rel {
    let x = t.op();
    phase_pair(t, &x)
}

fn rem3_4_nilpotent(t: &mut Trial) -> Rel {
    let x = gen::random_square_zero(&t.ctx, &mut t.rng);
    phase_pair(t, &x)
}

fn phase_pair(t: &mut Trial, x: &Matrix<f64>) -> Rel {
    let fam = phase_family(x, t.n);
    let left = t.wb(&slcirc(&fam)?)?;
    let plain = t.wb(&scirc(&fam)?)?;
    Ok(vec![(left, plain)])
}

// ---- imaginary left circulants ----

fn make_i(ts: &[Matrix<f64>], skew: bool) -> Result<BlockMatrix<f64>> {
    if skew {
        slcirc_i(ts)
    } else {
        lcirc_i(ts)
    }
}

/// `(||a - b|| + ||a + b||) / sqrt 2`
fn pair_term(t: &Trial, a: &Matrix<f64>, b: &Matrix<f64>) -> Result<f64> {
    Ok((t.norm(&diff(a, b))? + t.norm(&sum(a, b))?) * FRAC_1_SQRT_2)
}

fn small_lcirc_i(t: &mut Trial, skew: bool) -> Rel {
    let ts = t.ops(2);
    let lhs = t.wb(&make_i(&ts, skew)?)?;
    Ok(vec![(lhs, t.w(&ts[0])? + t.w(&ts[1])?)])
}

fn three(t: &mut Trial, skew: bool, coef: f64) -> Rel {
    let ts = t.ops(3);
    let lhs = t.wb(&make_i(&ts, skew)?)?;
    let w: Vec<f64> = ts.iter().map(|x| t.w(x)).collect::<Result<_>>()?;
    let pair = t.norm(&diff(&ts[0], &ts[1]))? + t.norm(&sum(&ts[0], &ts[1]))?;
    Ok(vec![(lhs, w[2] + w[0].max(w[1]) + coef * pair)])
}

fn four(t: &mut Trial, skew: bool) -> Rel {
    let ts = t.ops(4);
    let lhs = t.wb(&make_i(&ts, skew)?)?;
    let w: Vec<f64> = ts.iter().map(|x| t.w(x)).collect::<Result<_>>()?;
    let rhs = w[3] + 2.0 * w[0].max(w[2]) + pair_term(t, &ts[0], &ts[1])? + pair_term(t, &ts[1], &ts[2])?;
    Ok(vec![(lhs, rhs)])
}

fn prop4_5(t: &mut Trial) -> Rel {
    let ts = t.ops(5);
    let lhs = t.wb(&lcirc_i(&ts)?)?;
    let w: Vec<f64> = ts.iter().map(|x| t.w(x)).collect::<Result<_>>()?;
    let mut rhs = w[4] + w[1].max(w[2]) + w[0].max(w[3]) + w[3].hypot(w[1]);
    for i in 0..3 {
        rhs += pair_term(t, &ts[i + 1], &ts[i])?;
    }
    Ok(vec![(lhs, rhs)])
}

// ---- general block matrices ----

#[derive(Clone, Copy, PartialEq)]
enum Arrow {
    General,
    Symmetric,
    ZeroCorner,
    FirstRow,
}

fn arrow(t: &mut Trial, shape: Arrow) -> Rel {
    let n = t.n;
    let corner = if shape == Arrow::ZeroCorner { t.zero() } else { t.op() };
    let row = t.ops(n - 1);
    let col = match shape {
        Arrow::General => t.ops(n - 1),
        Arrow::Symmetric | Arrow::ZeroCorner => row.clone(),
        Arrow::FirstRow => vec![t.zero(); n - 1],
    };
    let z = t.zero();
    let m = BlockMatrix::from_fn(n, t.d, |i, j| match (i, j) {
        (0, 0) => corner.clone(),
        (0, j) => row[j - 1].clone(),
        (i, 0) => col[i - 1].clone(),
        _ => z.clone(),
    })?;
    let lhs = t.wb(&m)?;
    let w11 = t.w(&corner)?;
    let rhs = match shape {
        Arrow::General => {
            let mut acc = 0.0;
            for k in 0..n - 1 {
                acc += t.w_off(&row[k], &col[k])?.powi(2);
            }
            (w11 + (w11 * w11 + 4.0 * acc).sqrt()) / 2.0
        }
        Arrow::Symmetric => {
            let acc: f64 = row.iter().map(|x| t.w(x).map(|v| v * v)).sum::<Result<f64>>()?;
            (w11 + (w11 * w11 + 4.0 * acc).sqrt()) / 2.0
        }
        Arrow::ZeroCorner => row.iter().map(|x| t.w(x).map(|v| v * v)).sum::<Result<f64>>()?.sqrt(),
        Arrow::FirstRow => {
            let acc: f64 = row.iter().map(|x| t.norm(x).map(|v| v * v)).sum::<Result<f64>>()?;
            (w11 + (w11 * w11 + acc).sqrt()) / 2.0
        }
    };
    Ok(vec![(lhs, rhs)])
}

#[derive(Clone, Copy, PartialEq)]
enum General {
    Full,
    Symmetric,
    Upper,
}

fn general(t: &mut Trial, shape: General) -> Rel {
    let n = t.n;
    let mut m = square(t, n, |t, i, j| if shape == General::Upper && i > j { t.zero() } else { t.op() })?;
    if shape == General::Symmetric {
        for i in 0..n {
            for j in 0..i {
                m.set_block(i, j, m.block(j, i).clone())?;
            }
        }
    }
    let lhs = t.wb(&m)?;
    let mut rhs = 0.0;
    for i in 0..n {
        let wii = t.w(m.block(i, i))?;
        let mut acc = 0.0;
        for j in i + 1..n {
            acc += match shape {
                General::Full => 4.0 * t.w_off(m.block(i, j), m.block(j, i))?.powi(2),
                General::Symmetric => 4.0 * t.w(m.block(i, j))?.powi(2),
                General::Upper => t.norm(m.block(i, j))?.powi(2),
            };
        }
        rhs += (wii + (wii * wii + acc).sqrt()) / 2.0;
    }
    Ok(vec![(lhs, rhs)])
}

fn lemma4_8(t: &mut Trial) -> Rel {
    let (a, b) = (t.op(), t.op());
    let z = t.zero();
    let m = BlockMatrix::from_fn(3, t.d, |i, j| match (i, j) {
        (0, 1) | (1, 0) => a.clone(),
        (1, 2) | (2, 1) => b.clone(),
        _ => z.clone(),
    })?;
    let lhs = t.wb(&m)?;
    Ok(vec![(lhs, t.w(&a)?.hypot(t.w(&b)?))])
}
