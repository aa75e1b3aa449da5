//! Closed-form reference values written out independently of the library, in terms of the
//! raw dimensions.

#![allow(dead_code)]

pub fn big_d(d: usize) -> f64 {
    1.0 - 1.0 / d as f64
}

pub fn isa(x: f64, y: f64, da: usize, db: usize) -> f64 {
    x / db as f64 + y / da as f64 + big_d(da) * big_d(db)
}

pub fn dssa(x: f64, y: f64, da: usize, db: usize) -> f64 {
    let (a, b) = (big_d(da), big_d(db));
    let sa = (1.0 - x / a).max(0.0).sqrt();
    let sb = (1.0 - y / b).max(0.0).sqrt();
    x + y - 2.0 * a * b * (1.0 - sa) * (1.0 - sb)
}

pub fn restriction(y: f64, da: usize, db: usize) -> f64 {
    let b = big_d(db);
    big_d(da) * (y / b - 1.0 + 2.0 * (1.0 - y / b).max(0.0).sqrt())
}

pub fn sharp(x: f64, y: f64, da: usize, db: usize) -> f64 {
    if x <= restriction(y, da, db) {
        dssa(x, y, da, db)
    } else {
        isa(x, y, da, db)
    }
}

pub fn audenaert(x: f64, y: f64) -> Option<f64> {
    let (sx, sy) = ((1.0 - x).sqrt(), (1.0 - y).sqrt());
    (sx + sy >= 1.0).then_some(x + y - 2.0 * (1.0 - sx) * (1.0 - sy))
}

pub fn appel(x: f64, y: f64, da: usize, db: usize) -> f64 {
    let d = (da * db) as f64;
    1.0 + 1.0 / d - 2.0 * ((1.0 - x) * (1.0 - y) / d).sqrt()
}

/// Smallest `z` with `sharp_{(d_A, d_A d_B)}(x, z) ≥ y`, by plain bisection.
pub fn invert(x: f64, y: f64, da: usize, db: usize) -> f64 {
    let dr = da * db;
    if sharp(x, 0.0, da, dr) >= y {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, big_d(dr));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sharp(x, mid, da, dr) >= y {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

pub fn inverted(x: f64, y: f64, da: usize, db: usize) -> f64 {
    invert(x, y, da, db).max(invert(y, x, db, da))
}

/// Grid `k/n · max` for `k = 0..=n`.
pub fn axis(max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| max * k as f64 / n as f64).collect()
}
