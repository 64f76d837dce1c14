//! Independent oracles for the integration tests. Nothing here calls the
//! library code it is used to check.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// Signed permutation as a plain image vector on `1..=m`.
pub type Signed = Vec<i32>;

pub fn apply(w: &Signed, i: i32) -> i32 {
    if i > 0 {
        w[i as usize - 1]
    } else {
        -w[(-i) as usize - 1]
    }
}

pub fn compose(a: &Signed, b: &Signed) -> Signed {
    b.iter().map(|&x| apply(a, x)).collect()
}

pub fn inverse(w: &Signed) -> Signed {
    let mut out = vec![0; w.len()];
    for (k, &x) in w.iter().enumerate() {
        let i = k as i32 + 1;
        out[x.unsigned_abs() as usize - 1] = if x > 0 { i } else { -i };
    }
    out
}

/// All signed permutations of rank `m` by counting through sign masks and
/// lexicographic permutations.
pub fn all_signed(m: usize) -> Vec<Signed> {
    let mut perms: Vec<Vec<i32>> = vec![vec![]];
    for k in 1..=m as i32 {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                (0..=p.len()).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    q
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for p in perms {
        for mask in 0u32..1 << m {
            out.push(p.iter().enumerate().map(|(k, &x)| if mask >> k & 1 == 1 { -x } else { x }).collect());
        }
    }
    out
}

/// `(positive lengths, negative lengths)`, each sorted descending, by
/// following orbits of the map on `±1..±m` directly.
pub fn cycle_lengths(w: &Signed) -> (Vec<usize>, Vec<usize>) {
    let m = w.len();
    let mut seen = vec![false; m + 1];
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for a in 1..=m {
        if seen[a] {
            continue;
        }
        let mut x = a as i32;
        let mut steps = 0;
        loop {
            seen[x.unsigned_abs() as usize] = true;
            x = apply(w, x);
            steps += 1;
            if x == a as i32 {
                pos.push(steps);
                break;
            }
            if x == -(a as i32) {
                neg.push(steps);
                break;
            }
        }
    }
    pos.sort_unstable_by(|a, b| b.cmp(a));
    neg.sort_unstable_by(|a, b| b.cmp(a));
    (pos, neg)
}

/// Conjugacy classes by brute-force conjugation: each class as its set of
/// elements.
pub fn brute_force_classes(m: usize) -> Vec<Vec<Signed>> {
    let els = all_signed(m);
    let mut class_of: BTreeMap<Signed, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<Signed>> = Vec::new();
    for w in &els {
        if class_of.contains_key(w) {
            continue;
        }
        let id = classes.len();
        let mut members: Vec<Signed> = Vec::new();
        for g in &els {
            let c = compose(&compose(g, w), &inverse(g));
            if !class_of.contains_key(&c) {
                class_of.insert(c.clone(), id);
                members.push(c);
            }
        }
        classes.push(members);
    }
    classes
}

/// Rank of an integer matrix over `Q` by fraction-free elimination in i128.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let (f, g) = (a[i][c], a[r][c]);
                for j in 0..cols {
                    a[i][j] = a[i][j] * g - a[r][j] * f;
                }
                let content = a[i].iter().fold(0i128, |acc, &x| gcd(acc, x));
                if content > 1 {
                    for x in a[i].iter_mut() {
                        *x /= content;
                    }
                }
            }
        }
        r += 1;
    }
    r
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Elementary divisors via determinantal divisors: `d_r` is the gcd of
/// all `r × r` minors and the `r`-th invariant factor is `d_r / d_{r-1}`.
/// Returns the factors greater than one.
pub fn elementary_divisors_by_minors(rows: &[Vec<i64>]) -> Vec<i128> {
    let n = rows.len();
    let k = rows.first().map_or(0, Vec::len);
    let mut prev = 1i128;
    let mut out = Vec::new();
    for r in 1..=n.min(k) {
        let mut d = 0i128;
        for rs in combinations(n, r) {
            for cs in combinations(k, r) {
                let minor: Vec<Vec<i128>> =
                    rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j] as i128).collect()).collect();
                d = gcd(d, det(minor));
                if d == prev {
                    break;
                }
            }
            if d == prev {
                break;
            }
        }
        if d == 0 {
            break;
        }
        let factor = d / prev;
        if factor > 1 {
            out.push(factor);
        }
        prev = d;
    }
    out
}

/// `X^*(T)` actions built from scratch: basis `χ_{-m..-1}, [χ_0], χ_{1..m}`.
pub fn lattice_actions(n: usize, w: &Signed) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let m = n / 2;
    let odd = n % 2 == 1;
    let pos = |label: i32| -> usize {
        if label < 0 {
            (label + m as i32) as usize
        } else if label == 0 {
            m
        } else {
            m + label as usize - 1 + odd as usize
        }
    };
    let mut labels: Vec<i32> = (-(m as i32)..0).collect();
    if odd {
        labels.push(0);
    }
    labels.extend(1..=m as i32);
    let mut tau = vec![vec![0i64; n]; n];
    let mut frob = vec![vec![0i64; n]; n];
    for &l in &labels {
        tau[pos(-l)][pos(l)] = -1;
        let img = if l == 0 { 0 } else { apply(w, l) };
        frob[pos(img)][pos(l)] = 1;
    }
    (tau, frob)
}

pub fn minus_identity(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter().enumerate().map(|(i, r)| r.iter().enumerate().map(|(j, &x)| x - (i == j) as i64).collect()).collect()
}

/// Number of matrices over `F_p` (p prime) of size `d × d` preserving the
/// bilinear form with Gram matrix `g` and having determinant one.
pub fn count_isometries(p: i64, g: &[Vec<i64>], require_det_one: bool) -> usize {
    let d = g.len();
    let total = (p as usize).pow((d * d) as u32);
    let mut count = 0;
    for code in 0..total {
        let mut c = code;
        let mut a = vec![vec![0i64; d]; d];
        for row in a.iter_mut() {
            for x in row.iter_mut() {
                *x = (c % p as usize) as i64;
                c /= p as usize;
            }
        }
        // A^T G A = G
        let ok = (0..d).all(|i| {
            (0..d).all(|j| {
                let mut s = 0;
                for k in 0..d {
                    for l in 0..d {
                        s += a[k][i] * g[k][l] * a[l][j];
                    }
                }
                (s - g[i][j]).rem_euclid(p) == 0
            })
        });
        if ok && (!require_det_one || small_det_mod(&a, p) == 1) {
            count += 1;
        }
    }
    count
}

fn small_det_mod(a: &[Vec<i64>], p: i64) -> i64 {
    let m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    (det(m) as i64).rem_euclid(p)
}

/// Number of ordered symplectic bases `(e_1, f_1, …, e_k, f_k)` of
/// `F_p^{2k}` for the standard form, which equals `|Sp_{2k}(p)|`.
pub fn count_symplectic_bases(p: i64, k: usize) -> u64 {
    let d = 2 * k;
    let form = |u: &[i64], v: &[i64]| -> i64 {
        let mut s = 0;
        for t in 0..k {
            s += u[2 * t] * v[2 * t + 1] - u[2 * t + 1] * v[2 * t];
        }
        s.rem_euclid(p)
    };
    let vectors: Vec<Vec<i64>> = (0..(p as usize).pow(d as u32))
        .map(|mut c| {
            (0..d)
                .map(|_| {
                    let x = (c % p as usize) as i64;
                    c /= p as usize;
                    x
                })
                .collect()
        })
        .collect();
    // the new vector pairs to 1 with its partner e_t and to 0 with the rest
    fn go(chosen: &mut Vec<usize>, vectors: &[Vec<i64>], d: usize, form: &dyn Fn(&[i64], &[i64]) -> i64) -> u64 {
        if chosen.len() == d {
            return 1;
        }
        let slot = chosen.len();
        let mut total = 0;
        for (idx, v) in vectors.iter().enumerate() {
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let ok = chosen.iter().enumerate().all(|(s, &c)| {
                let expect = if slot % 2 == 1 && s == slot - 1 { 1 } else { 0 };
                form(&vectors[c], v) == expect
            });
            if ok {
                chosen.push(idx);
                total += go(chosen, vectors, d, form);
                chosen.pop();
            }
        }
        total
    }
    go(&mut Vec::new(), &vectors, d, &form)
}
