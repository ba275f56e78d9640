//! WebAssembly bindings for the browser demo. Each export returns JSON or
//! raw pixels; the `*_impl` functions hold the logic and are tested natively.

use ballgroup::ball_numeric::{
    act, dist_from_origin, estimate_volume, in_fs, to_numeric, BallPoint, C64,
};
use ballgroup::lattice::Constants;
use ballgroup::subgroup_pi::{quotient_map, PiTable};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest sample count accepted from the page.
pub const MAX_SAMPLES: u64 = 20_000_000;

/// Slices of the ball shown by [`fs_slice`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Plane {
    /// `(x + iy, 0)`.
    FirstCoordinate,
    /// `(x, y)` with both coordinates real.
    RealPlane,
    /// `(x, iy)`.
    Mixed,
}

impl Plane {
    fn from_index(i: u32) -> Plane {
        match i {
            1 => Plane::RealPlane,
            2 => Plane::Mixed,
            _ => Plane::FirstCoordinate,
        }
    }

    fn point(self, x: f64, y: f64) -> BallPoint {
        match self {
            Plane::FirstCoordinate => BallPoint::new(C64::new(x, y), C64::new(0.0, 0.0)),
            Plane::RealPlane => BallPoint::new(C64::new(x, 0.0), C64::new(y, 0.0)),
            Plane::Mixed => BallPoint::new(C64::new(x, 0.0), C64::new(0.0, y)),
        }
    }
}

/// RGBA pixels of a `size × size` slice of the unit ball: points of `F_S`
/// are shaded by `d(0, ·)`, the rest of the ball is grey.
pub fn fs_slice_impl(size: u32, plane: Plane) -> Vec<u8> {
    let n = size.max(1) as usize;
    let mut out = vec![0u8; n * n * 4];
    let rmax = ballgroup::ball_numeric::r0_closed_form();
    for py in 0..n {
        for px in 0..n {
            let x = 2.0 * (px as f64 + 0.5) / n as f64 - 1.0;
            let y = 1.0 - 2.0 * (py as f64 + 0.5) / n as f64;
            let p = plane.point(x, y);
            let rgba = if !p.is_inside() {
                [255, 255, 255, 255]
            } else if in_fs(&p) {
                let t = (dist_from_origin(&p) / rmax).min(1.0);
                [
                    (30.0 + 200.0 * t) as u8,
                    (90.0 + 60.0 * (1.0 - t)) as u8,
                    (200.0 - 120.0 * t) as u8,
                    255,
                ]
            } else {
                [225, 225, 225, 255]
            };
            out[(py * n + px) * 4..][..4].copy_from_slice(&rgba);
        }
    }
    out
}

#[wasm_bindgen]
pub fn fs_slice(size: u32, plane: u32) -> Vec<u8> {
    fs_slice_impl(size, Plane::from_index(plane))
}

#[derive(Serialize)]
struct VolumeView {
    samples: u64,
    seed: u64,
    hits: u64,
    fs_volume: f64,
    covolume: f64,
    std_error: f64,
    expected: f64,
    relative_error: f64,
}

pub fn volume_impl(samples: u64, seed: u64) -> Result<String, String> {
    if samples == 0 || samples > MAX_SAMPLES {
        return Err(format!("samples must be between 1 and {MAX_SAMPLES}"));
    }
    let v = estimate_volume(samples, seed);
    serde_json::to_string(&VolumeView {
        samples: v.samples,
        seed: v.seed,
        hits: v.hits,
        fs_volume: v.fs_volume,
        covolume: v.estimate,
        std_error: v.std_error,
        expected: v.expected,
        relative_error: v.relative_error,
    })
    .map_err(|e| e.to_string())
}

/// Monte-Carlo estimate of the covolume, as JSON.
#[wasm_bindgen]
pub fn volume(samples: f64, seed: f64) -> Result<String, JsError> {
    volume_impl(samples as u64, seed as u64).map_err(|e| JsError::new(&e))
}

#[derive(Serialize)]
struct WordView {
    word: String,
    entry33_abs2: String,
    entry33_abs2_decimal: f64,
    displacement: f64,
    image_of_origin: [[f64; 2]; 2],
    det_class: u8,
    in_pi: bool,
    quotient: String,
    matrix: String,
}

pub fn inspect_impl(word: &str) -> Result<String, String> {
    let g = Constants::get().word(word).map_err(|e| e.to_string())?;
    let n = g.entry33_abs2();
    let p = act(&to_numeric(&g), &BallPoint::origin()).map_err(|e| e.to_string())?;
    serde_json::to_string(&WordView {
        word: word.to_string(),
        entry33_abs2: n.to_string(),
        entry33_abs2_decimal: n.to_f64(),
        displacement: dist_from_origin(&p),
        image_of_origin: [[p.z1.re, p.z1.im], [p.z2.re, p.z2.im]],
        det_class: g.det_class().0,
        in_pi: PiTable::get().contains(&g),
        quotient: quotient_map(&g).to_string(),
        matrix: g.matrix().to_string(),
    })
    .map_err(|e| e.to_string())
}

/// Exact and numeric data for a word in `u, v, b, j, a1, a2, a3`, as JSON.
#[wasm_bindgen]
pub fn inspect(word: &str) -> Result<String, JsError> {
    inspect_impl(word).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_has_domain_pixels() {
        let px = fs_slice_impl(32, Plane::FirstCoordinate);
        assert_eq!(px.len(), 32 * 32 * 4);
        let centre = ((16 * 32) + 16) * 4;
        assert_ne!(&px[centre..centre + 3], &[225, 225, 225]);
        assert_eq!(&px[0..3], &[255, 255, 255]);
    }

    #[test]
    fn volume_json() {
        let v: serde_json::Value = serde_json::from_str(&volume_impl(200_000, 1).unwrap()).unwrap();
        assert!(v["relative_error"].as_f64().unwrap() < 0.1);
        assert!(volume_impl(0, 1).is_err());
    }

    #[test]
    fn inspect_b() {
        let v: serde_json::Value = serde_json::from_str(&inspect_impl("b").unwrap()).unwrap();
        assert_eq!(v["entry33_abs2"], "2 + 1*sqrt3");
        assert!((v["displacement"].as_f64().unwrap() - 1.2767).abs() < 1e-4);
        assert_eq!(v["in_pi"], false);
        let a1: serde_json::Value = serde_json::from_str(&inspect_impl("a1").unwrap()).unwrap();
        assert_eq!(a1["in_pi"], true);
        assert!(inspect_impl("q").is_err());
    }
}
