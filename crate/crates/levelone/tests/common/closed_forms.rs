//! Multiplicities of every endoscopic shape of SO7, SO9 and SO8, written
//! out case by case from the sign conditions. Shapes are matched on
//! `(rank of pi, d, trivial)` after sorting blocks by rank, then `d`, then
//! decreasing weights.

use levelone::arthur::{ArthurParameter, Group, SO7, SO8, SO9};
use levelone::basecounts::Duality;

type Sig = (usize, usize, bool);

fn sorted(p: &ArthurParameter) -> (Vec<Sig>, Vec<Vec<i64>>) {
    let mut b: Vec<_> =
        p.blocks.iter().map(|x| ((x.pi.n, x.d, x.pi.duality == Duality::Trivial), x.pi.hodge.clone())).collect();
    b.sort_by(|x, y| (y.0 .0, y.0 .1, &y.1).cmp(&(x.0 .0, x.0 .1, &x.1)));
    b.into_iter().unzip()
}

const P: bool = false;
const T: bool = true;

fn so7(sig: &[Sig], h: &[Vec<i64>]) -> Option<u64> {
    let m = match sig {
        [_] => true,
        [(4, 1, P), (2, 1, P)] => h[0][0] > h[1][0] && h[1][0] > h[0][1],
        [(4, 1, P), (1, 2, T)] => (h[0][0] + h[0][1]) % 4 == 0,
        [(2, 1, P), (1, 4, T)] => h[0][0] % 4 == 1,
        [(2, 1, P), (2, 1, P), (2, 1, P)] => false,
        [(2, 1, P), (2, 1, P), (1, 2, T)] => h[0][0] % 4 == 1 && h[1][0] % 4 == 3,
        _ => return None,
    };
    Some(m as u64)
}

fn so9(sig: &[Sig], h: &[Vec<i64>]) -> Option<u64> {
    let m = match sig {
        [_] => true,
        [(6, 1, P), (2, 1, P)] => {
            let (a, b, c, d) = (h[0][0], h[0][1], h[0][2], h[1][0]);
            d > a || (b > d && d > c)
        }
        [(6, 1, P), (1, 2, T)] => h[0].iter().sum::<i64>() % 4 == 3,
        [(3, 2, P), (2, 1, P)] => {
            let (a, b) = (h[0][0], h[1][0]);
            if b > a + 1 {
                b % 4 == 3
            } else {
                b % 4 == 1
            }
        }
        [(2, 3, P), (2, 1, P)] => h[1][0] > h[0][0] + 1,
        [(2, 3, P), (1, 2, T)] => false,
        [(2, 1, P), (1, 6, T)] => h[0][0] % 4 == 3,
        [(4, 1, P), (2, 1, P), (2, 1, P)] => {
            let (a, b, c, d) = (h[0][0], h[0][1], h[1][0], h[2][0]);
            c > a && a > d && d > b
        }
        [(4, 1, P), (2, 1, P), (1, 2, T)] => {
            let (a, b, c) = (h[0][0], h[0][1], h[1][0]);
            if a > c && c > b {
                (a + b) % 4 == 2 && c % 4 == 1
            } else {
                (a + b) % 4 == 0 && c % 4 == 3
            }
        }
        [(2, 1, P), (2, 1, P), (1, 4, T)] => h[0][0] % 4 == 3 && h[1][0] % 4 == 1,
        [(2, 1, P), (2, 1, P), (2, 1, P), (2, 1, P)] => false,
        [(2, 1, P), (2, 1, P), (2, 1, P), (1, 2, T)] => h[0][0] % 4 == 3 && h[1][0] % 4 == 1 && h[2][0] % 4 == 3,
        [(4, 1, P), (4, 1, P)] => {
            let (a, b, c, d) = (h[0][0], h[0][1], h[1][0], h[1][1]);
            a > c && c > b && b > d
        }
        [(4, 1, P), (1, 4, T)] => (h[0][0] + h[0][1]) % 4 == 0,
        _ => return None,
    };
    Some(m as u64)
}

fn so8(sig: &[Sig], h: &[Vec<i64>], w4: i64) -> Option<u64> {
    let e = if w4 == 0 { 2 } else { 1 };
    let odd = |s: &Sig| (s.0 * s.1) % 2 == 1;
    let m = match sig {
        [_] => e,
        [x, y] if odd(x) && odd(y) => 1,
        [(4, 1, P), (4, 1, P)] => {
            let (a, b, c, d) = (h[0][0], h[0][1], h[1][0], h[1][1]);
            if a > c && c > b && b > d {
                e
            } else {
                0
            }
        }
        [(4, 1, P), (2, 2, P)] => {
            let (b, c, a) = (h[0][0], h[0][1], h[1][0]);
            if b > a && a > c {
                e
            } else {
                0
            }
        }
        [(2, 2, P), (2, 2, P)] => 0,
        [(4, 1, P), (3, 1, P), (1, 1, T)] => {
            let (a, b, c) = (h[0][0], h[0][1], h[1][0]);
            (a > c && c > b) as u64
        }
        [(3, 1, P), (2, 2, P), (1, 1, T)] => (h[0][0] > h[1][0]) as u64,
        [(4, 1, P), (1, 3, T), (1, 1, T)] => 0,
        [(2, 2, P), (1, 3, T), (1, 1, T)] => (h[0][0] % 4 == 1) as u64,
        _ => return None,
    };
    Some(m)
}

/// The closed-form multiplicity, or `None` for a shape not covered.
pub fn expected(p: &ArthurParameter, target: &[i64]) -> Option<u64> {
    let (sig, h) = sorted(p);
    match p.group {
        g if g == SO7 => so7(&sig, &h),
        g if g == SO9 => so9(&sig, &h),
        g if g == SO8 => so8(&sig, &h, *target.last().unwrap()),
        _ => None,
    }
}

/// Strictly decreasing tuples of length `len` drawn from `start, start + 2, ..`
/// with first entry at most `max`.
pub fn targets(len: usize, start: i64, max: i64) -> Vec<Vec<i64>> {
    fn go(len: usize, lo: i64, hi: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if len == 0 {
            let mut v = acc.clone();
            v.reverse();
            out.push(v);
            return;
        }
        let mut x = lo;
        while x <= hi {
            acc.push(x);
            go(len - 1, x + 2, hi, acc, out);
            acc.pop();
            x += 2;
        }
    }
    let mut out = vec![];
    go(len, start, max, &mut vec![], &mut out);
    out
}

/// Groups with their target ranges for the exhaustive comparison.
pub fn ranges() -> [(Group, Vec<Vec<i64>>); 3] {
    [(SO7, targets(3, 1, 29)), (SO9, targets(4, 1, 27)), (SO8, targets(4, 0, 30))]
}

/// False for shapes with an even orthogonal block of rank 2 mod 4; no such
/// label exists, so the case lists leave them out.
pub fn possible(p: &ArthurParameter) -> bool {
    p.blocks.iter().all(|b| b.pi.duality != Duality::Orthogonal || b.pi.n % 4 != 2)
}
