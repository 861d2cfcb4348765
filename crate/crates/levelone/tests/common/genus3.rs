//! Independent genus 3 values from cusp form dimensions in genus one.

use super::computed;

pub const OSTAR_TRIPLES: [[i64; 3]; 8] =
    [[24, 16, 8], [26, 16, 10], [26, 20, 6], [26, 20, 10], [26, 20, 14], [26, 24, 10], [26, 24, 14], [26, 24, 18]];

pub fn even_triples(max: i64) -> Vec<[i64; 3]> {
    let mut out = vec![];
    for w1 in (6..=max).step_by(2) {
        for w2 in (4..w1).step_by(2) {
            for w3 in (2..w2).step_by(2) {
                out.push([w1, w2, w3]);
            }
        }
    }
    out
}

/// `dim S_k(SL2(Z))` from the valence formula.
fn cusp_dim(k: i64) -> u64 {
    if k < 12 || k % 2 != 0 {
        return 0;
    }
    (k / 12 - if k % 12 == 2 { 1 } else { 0 }) as u64
}

/// Number of `Delta_w`: cusp forms of weight `w + 1`.
fn sref(w: i64) -> u64 {
    if w % 2 == 1 {
        cusp_dim(w + 1)
    } else {
        0
    }
}

/// The genus 3 formula with `O*(w) = S(w/2)` for `Sym^2` and
/// `O(w, v) = S((w+v)/2) S((w-v)/2)` for tensor products.
pub fn genus3_reference(w: [i64; 3]) -> u64 {
    let t = &computed().tables;
    let ostar1 = |x: i64| sref(x / 2);
    let o2 = sref((w[0] + w[2]) / 2) * sref((w[0] - w[2]) / 2);
    let mut v = t.ostar3(&w).unwrap() + o2 * ostar1(w[1]);
    if w[1] % 4 == 0 && w[1] == w[2] + 2 {
        v += sref(w[1] - 1) * ostar1(w[0]);
    }
    if w[1] % 4 == 0 && w[0] == w[1] + 2 {
        v += sref(w[1] + 1) * ostar1(w[2]);
    }
    v
}
