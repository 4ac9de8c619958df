//! Named permutation groups.

use super::{PermGroup, Permutation};
use crate::error::{Error, Result};

fn perm(images: Vec<usize>) -> Permutation {
    Permutation::new(images.into_iter().map(|x| x as u32).collect()).expect("valid permutation")
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Cyclic group generated by `x -> x + 1 mod n`.
pub fn cyclic(n: usize) -> Result<PermGroup> {
    if n == 0 {
        return Err(Error::invalid("cyclic group needs n >= 1"));
    }
    PermGroup::closure(n, &[perm((0..n).map(|x| (x + 1) % n).collect())])
}

pub fn symmetric(n: usize) -> Result<PermGroup> {
    if n == 0 {
        return Err(Error::invalid("symmetric group needs n >= 1"));
    }
    if n <= 2 {
        return cyclic(n);
    }
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let cycle = (0..n).map(|x| (x + 1) % n).collect();
    PermGroup::closure(n, &[perm(swap), perm(cycle)])
}

/// Even permutations, generated by the 3-cycles `(0 1 k)`.
pub fn alternating(n: usize) -> Result<PermGroup> {
    if n == 0 {
        return Err(Error::invalid("alternating group needs n >= 1"));
    }
    if n < 3 {
        return Ok(PermGroup::trivial(n));
    }
    let gens: Vec<Permutation> = (2..n)
        .map(|k| {
            let mut im: Vec<usize> = (0..n).collect();
            im[0] = 1;
            im[1] = k;
            im[k] = 0;
            perm(im)
        })
        .collect();
    PermGroup::closure(n, &gens)
}

/// Symmetries of the regular `n`-gon, order `2n`.
pub fn dihedral(n: usize) -> Result<PermGroup> {
    if n < 3 {
        return Err(Error::invalid("dihedral group needs n >= 3"));
    }
    let rot = (0..n).map(|x| (x + 1) % n).collect();
    let refl = (0..n).map(|x| (n - x) % n).collect();
    PermGroup::closure(n, &[perm(rot), perm(refl)])
}

fn primitive_root(p: u64) -> u64 {
    let order_of = |g: u64| {
        let mut x = g % p;
        let mut k = 1;
        while x != 1 {
            x = x * g % p;
            k += 1;
        }
        k
    };
    (2..p).find(|&g| order_of(g) == p - 1).unwrap_or(1)
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// Projective line over `F_p`, points ordered `[0:1], [1:0], [1:1], .., [1:p-1]`.
pub(crate) fn projective_index(x: u64, y: u64, p: u64) -> usize {
    if x % p == 0 {
        0
    } else {
        let inv = mod_pow(x, p - 2, p);
        1 + (y * inv % p) as usize
    }
}

pub(crate) fn projective_point(idx: usize) -> (u64, u64) {
    if idx == 0 {
        (0, 1)
    } else {
        (1, idx as u64 - 1)
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Permutation of the projective line induced by `[[a, b], [c, d]]` acting on
/// column vectors `(x, y)`.
pub(crate) fn mobius(a: u64, b: u64, c: u64, d: u64, p: u64) -> Permutation {
    let n = p as usize + 1;
    perm(
        (0..n)
            .map(|k| {
                let (x, y) = projective_point(k);
                projective_index((a * x + b * y) % p, (c * x + d * y) % p, p)
            })
            .collect(),
    )
}

/// `PGL_2(p)` acting on the `p + 1` points of the projective line.
pub fn pgl2(p: u64) -> Result<PermGroup> {
    check_odd_prime(p)?;
    let g = primitive_root(p);
    let gens = [mobius(1, 1, 0, 1, p), mobius(g, 0, 0, 1, p), mobius(0, 1, 1, 0, p)];
    PermGroup::closure(p as usize + 1, &gens)
}

/// Affine group `x -> a x + b` on `F_p`, sharply 2-transitive of order `p(p-1)`.
pub fn affine(p: u64) -> Result<PermGroup> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let n = p as usize;
    let g = primitive_root(p) as usize;
    let shift = (0..n).map(|x| (x + 1) % n).collect();
    let scale = (0..n).map(|x| x * g % n).collect();
    PermGroup::closure(n, &[perm(shift), perm(scale)])
}

/// Symmetries of `n` disjoint segments acting on their `2n` endpoints; point
/// `2s + e` is end `e` of segment `s`. Order `2^n n!`.
pub fn hyperoctahedral_segments(n: usize) -> Result<PermGroup> {
    if n == 0 {
        return Err(Error::invalid("hyperoctahedral group needs n >= 1"));
    }
    let m = 2 * n;
    let mut gens = vec![perm((0..m).map(|x| if x < 2 { x ^ 1 } else { x }).collect())];
    if n >= 2 {
        // swap segments 0 and 1, and cycle all segments
        gens.push(perm(
            (0..m)
                .map(|x| match x / 2 {
                    0 => x + 2,
                    1 => x - 2,
                    _ => x,
                })
                .collect(),
        ));
        gens.push(perm((0..m).map(|x| (x + 2) % m).collect()));
    }
    PermGroup::closure(m, &gens)
}

/// Parses `name:arg`, e.g. `cyclic:5`, `pgl2:7`, `hyperoctahedral-segments:3`.
pub fn parse_family(spec: &str) -> Result<PermGroup> {
    let (name, arg) = spec
        .split_once(':')
        .ok_or_else(|| Error::invalid(format!("family `{spec}` must have the form name:arg")))?;
    let n: u64 = arg
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("bad family argument `{arg}`")))?;
    // refuse anything whose natural degree is absurd before allocating
    if n > 4096 {
        return Err(Error::invalid(format!("family argument {n} too large")));
    }
    let k = n as usize;
    match name.trim() {
        "cyclic" => cyclic(k),
        "symmetric" => symmetric(k),
        "alternating" => alternating(k),
        "dihedral" => dihedral(k),
        "pgl2" => pgl2(n),
        "affine" => affine(n),
        "hyperoctahedral-segments" => hyperoctahedral_segments(k),
        other => Err(Error::invalid(format!("unknown group family `{other}`"))),
    }
}
