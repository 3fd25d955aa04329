//! Exact rational helpers shared by the polyhedral kernel.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn vec_i(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut s = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rat], s: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * s).collect()
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn to_f64_vec(a: &[Rat]) -> Vec<f64> {
    a.iter().map(to_f64).collect()
}

/// Nearest rational with denominator `2^bits`.
pub fn rationalize(x: f64, bits: u32) -> Rat {
    assert!(x.is_finite(), "cannot rationalize a non-finite value");
    let scale = (2f64).powi(bits as i32);
    let n = (x * scale).round();
    let num = BigInt::from(n as i128);
    let den = BigInt::one() << bits as usize;
    Rat::new(num, den)
}

pub fn rationalize_vec(v: &[f64], bits: u32) -> Vec<Rat> {
    v.iter().map(|&x| rationalize(x, bits)).collect()
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"0.25"` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((whole, decimals)) = s.split_once('.') {
        let neg = whole.trim_start().starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), decimals);
        let n: BigInt = digits.parse().map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
        let den = num_traits::pow(BigInt::from(10), decimals.len());
        let r = Rat::new(n, den);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad integer {s:?}")))?;
    Ok(Rat::from_integer(n))
}

pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact square root when `x` is the square of a rational.
pub fn sqrt_exact(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Rank of a list of rational row vectors (fraction-free enough for small sizes).
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    row_echelon(rows).len()
}

/// Reduced rows of a Gaussian elimination, one per pivot.
pub fn row_echelon(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    if m.is_empty() {
        return m;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for j in c..cols {
            let v = &m[r][j] / &piv;
            m[r][j] = v;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m
}

/// Basis of `{x in Q^n : rows·x = 0}`.
pub fn nullspace(rows: &[Vec<Rat>], n: usize) -> Vec<Vec<Rat>> {
    let e = row_echelon(rows);
    let pivots: Vec<usize> = e.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row")).collect();
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rat::zero(); n];
            v[free] = Rat::one();
            for (r, &p) in e.iter().zip(&pivots) {
                v[p] = -r[free].clone();
            }
            v
        })
        .collect()
}

/// Orthogonal projection of `v` onto the span of the independent rows `basis`.
pub fn project(basis: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    let gram: Vec<Vec<Rat>> = basis.iter().map(|a| basis.iter().map(|b| dot(a, b)).collect()).collect();
    let rhs: Vec<Rat> = basis.iter().map(|a| dot(a, v)).collect();
    let y = solve(&gram, &rhs).expect("independent basis");
    let mut out = vec![Rat::zero(); v.len()];
    for (c, b) in y.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// Solves the square system `a x = b`; `None` when singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let piv = m[c][c].clone();
        for j in c..=n {
            let v = &m[c][j] / &piv;
            m[c][j] = v;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let v = &m[c][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Exact determinant: rows are cleared to integers and reduced by fraction-free
/// (Bareiss) elimination, which keeps every intermediate entry a minor.
pub fn det(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    if n == 0 {
        return Rat::one();
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(c, p);
            sign = -sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let v = &m[i][j] * &m[c][c] - &m[i][c] * &m[c][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[c][c].clone();
    }
    Rat::new(sign * &m[n - 1][n - 1], scale)
}

/// Divides a nonzero vector by the absolute value of its largest-magnitude entry.
pub fn normalize_ray(v: &mut [Rat]) {
    let mut best: Option<Rat> = None;
    for x in v.iter() {
        let a = x.abs();
        if best.as_ref().is_none_or(|b| &a > b) {
            best = Some(a);
        }
    }
    if let Some(b) = best {
        if !b.is_zero() && !b.is_one() {
            for x in v.iter_mut() {
                *x = &*x / &b;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_forms() {
        assert_eq!(parse_rat("3/4").unwrap(), frac(3, 4));
        assert_eq!(parse_rat("-2").unwrap(), int(-2));
        assert_eq!(parse_rat("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_rat("-1.5").unwrap(), frac(-3, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(sqrt_exact(&frac(25, 9)), Some(frac(5, 3)));
        assert_eq!(sqrt_exact(&int(2)), None);
    }

    #[test]
    fn determinant_and_solve() {
        let a = vec![vec_i(&[2, 1]), vec_i(&[1, 3])];
        assert_eq!(det(&a), int(5));
        let b =
            vec![vec![frac(1, 2), frac(1, 3), int(0)], vec![int(0), int(2), frac(-1, 4)], vec![int(1), int(0), int(3)]];
        // 1/2·(6) − 1/3·(1/4) + 0
        assert_eq!(det(&b), frac(3, 1) - frac(1, 12));
        assert_eq!(det(&[vec_i(&[0, 1]), vec_i(&[1, 0])]), int(-1));
        assert_eq!(det(&[vec_i(&[1, 2]), vec_i(&[2, 4])]), int(0));
        let x = solve(&a, &vec_i(&[3, 4])).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
        assert_eq!(rank(&[vec_i(&[1, 2]), vec_i(&[2, 4])]), 1);
    }

    #[test]
    fn rationalize_rounds_to_grid() {
        assert_eq!(rationalize(0.5, 10), frac(1, 2));
        assert_eq!(rationalize(1.0 / 3.0, 2), frac(1, 4));
    }

    #[test]
    fn nullspace_and_projection() {
        let rows = vec![vec_i(&[1, 1, 0])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(&rows[0], v).is_zero());
        }
        assert_eq!(nullspace(&[], 2).len(), 2);
        let p = project(&[vec_i(&[1, 1, 0])], &vec_i(&[1, 0, 5]));
        assert_eq!(p, vec![frac(1, 2), frac(1, 2), int(0)]);
    }
}
