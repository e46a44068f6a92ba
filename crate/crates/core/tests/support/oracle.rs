//! Brute-force reference evaluator, written without reusing any engine
//! geometry: winding-number containment, separating-axis occlusion and a
//! direct sum over fixtures.

#![allow(dead_code)]

use luxforge_core::geometry::{RoomModel, SurfaceKind, Vec3};
use luxforge_core::photometry::PlacedFixture;

/// Winding number of `outline` around `(x, y)`.
fn winding(outline: &[[f64; 2]], x: f64, y: f64) -> i32 {
    let mut w = 0;
    let n = outline.len();
    for i in 0..n {
        let [ax, ay] = outline[i];
        let [bx, by] = outline[(i + 1) % n];
        let side = (bx - ax) * (y - ay) - (x - ax) * (by - ay);
        if ay <= y {
            if by > y && side > 0.0 {
                w += 1;
            }
        } else if by <= y && side < 0.0 {
            w -= 1;
        }
    }
    w
}

fn on_edge(outline: &[[f64; 2]], x: f64, y: f64) -> bool {
    let n = outline.len();
    (0..n).any(|i| {
        let [ax, ay] = outline[i];
        let [bx, by] = outline[(i + 1) % n];
        let (dx, dy) = (bx - ax, by - ay);
        let len2 = dx * dx + dy * dy;
        let t = (((x - ax) * dx + (y - ay) * dy) / len2).clamp(0.0, 1.0);
        let (px, py) = (ax + t * dx - x, ay + t * dy - y);
        (px * px + py * py).sqrt() <= 1e-9
    })
}

pub fn inside(room: &RoomModel, x: f64, y: f64) -> bool {
    let outline: Vec<[f64; 2]> = room.outline.iter().map(|p| [p.x, p.y]).collect();
    on_edge(&outline, x, y) || winding(&outline, x, y) != 0
}

/// Separating-axis test between the open segment `a`-`b` and a closed
/// axis-aligned box. Grazing an edge counts; an endpoint resting on a face
/// does not.
pub fn segment_box_overlap(a: [f64; 3], b: [f64; 3], lo: [f64; 3], hi: [f64; 3]) -> bool {
    const TRIM: f64 = 1e-9;
    let lerp = |t: f64| -> [f64; 3] { [0, 1, 2].map(|i| a[i] + t * (b[i] - a[i])) };
    let (a, b) = (lerp(TRIM), lerp(1.0 - TRIM));
    let c: Vec<f64> = (0..3).map(|i| 0.5 * (a[i] + b[i])).collect();
    let h: Vec<f64> = (0..3).map(|i| 0.5 * (b[i] - a[i])).collect();
    let bc: Vec<f64> = (0..3).map(|i| 0.5 * (lo[i] + hi[i])).collect();
    let e: Vec<f64> = (0..3).map(|i| 0.5 * (hi[i] - lo[i])).collect();
    let t: Vec<f64> = (0..3).map(|i| c[i] - bc[i]).collect();
    let mut axes: Vec<[f64; 3]> = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for k in 0..3 {
        let mut unit = [0.0; 3];
        unit[k] = 1.0;
        axes.push([
            h[1] * unit[2] - h[2] * unit[1],
            h[2] * unit[0] - h[0] * unit[2],
            h[0] * unit[1] - h[1] * unit[0],
        ]);
    }
    for axis in axes {
        let norm: f64 = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-15 {
            continue;
        }
        let dist = (0..3).map(|i| t[i] * axis[i]).sum::<f64>().abs();
        let box_r: f64 = (0..3).map(|i| e[i] * axis[i].abs()).sum();
        let seg_r = (0..3).map(|i| h[i] * axis[i]).sum::<f64>().abs();
        if dist > box_r + seg_r + 1e-12 * norm {
            return false;
        }
    }
    true
}

pub fn blocked(room: &RoomModel, a: [f64; 3], b: [f64; 3]) -> bool {
    room.objects.iter().any(|o| {
        segment_box_overlap(
            a,
            b,
            [o.footprint.min.x, o.footprint.min.y, 0.0],
            [o.footprint.max.x, o.footprint.max.y, o.height],
        )
    })
}

pub fn workplane_points(room: &RoomModel, spacing: f64, height: f64) -> Vec<[f64; 3]> {
    let xs = room.outline.iter().map(|p| p.x);
    let ys = room.outline.iter().map(|p| p.y);
    let (x0, x1) = (xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max));
    let (y0, y1) = (ys.clone().fold(f64::INFINITY, f64::min), ys.fold(f64::NEG_INFINITY, f64::max));
    let mut out = Vec::new();
    let mut j = 0;
    loop {
        let y = y0 + (j as f64 + 0.5) * spacing;
        if y > y1 + 1e-9 {
            break;
        }
        let mut i = 0;
        loop {
            let x = x0 + (i as f64 + 0.5) * spacing;
            if x > x1 + 1e-9 {
                break;
            }
            let masked = room.objects.iter().any(|o| {
                o.height >= height
                    && o.footprint.min.x <= x
                    && x <= o.footprint.max.x
                    && o.footprint.min.y <= y
                    && y <= o.footprint.max.y
            });
            if inside(room, x, y) && !masked {
                out.push([x, y, height]);
            }
            i += 1;
        }
        j += 1;
    }
    out
}

fn surface_area_and_reflectance(room: &RoomModel) -> (f64, f64) {
    let n = room.outline.len();
    let mut area2 = 0.0;
    let mut weighted = 0.0;
    let mut walls = 0.0;
    for i in 0..n {
        let a = room.outline[i];
        let b = room.outline[(i + 1) % n];
        area2 += a.x * b.y - b.x * a.y;
        let len = ((b.x - a.x).powi(2) + (b.y - a.y).powi(2)).sqrt();
        let wall = len * room.ceiling_height;
        walls += wall;
        weighted += wall * reflectance_of(room, SurfaceKind::Wall(i));
    }
    let floor = area2.abs() / 2.0;
    weighted += floor * (reflectance_of(room, SurfaceKind::Floor) + reflectance_of(room, SurfaceKind::Ceiling));
    let total = 2.0 * floor + walls;
    (total, weighted / total)
}

fn reflectance_of(room: &RoomModel, kind: SurfaceKind) -> f64 {
    room.surfaces.iter().find(|s| s.kind == kind).map(|s| s.reflectance).unwrap()
}

pub fn point_lux(room: &RoomModel, fixtures: &[PlacedFixture], dims: &[f64], p: [f64; 3]) -> f64 {
    let mut total = 0.0;
    for (f, &dim) in fixtures.iter().zip(dims) {
        let s = [f.position.x, f.position.y, f.position.z];
        let v = [p[0] - s[0], p[1] - s[1], p[2] - s[2]];
        let d2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        let d = d2.sqrt();
        let cos_t = (f.axis.x * v[0] + f.axis.y * v[1] + f.axis.z * v[2]) / d;
        let cos_x = -v[2] / d;
        if cos_t < 0.0 || cos_x < 0.0 || blocked(room, s, p) {
            continue;
        }
        let m = f.spec.distribution_exponent;
        let i0 = f.spec.flux * (m + 1.0) / (2.0 * std::f64::consts::PI);
        total += dim * i0 * cos_t.powf(m) * cos_x / d2;
    }
    let (area, rho) = surface_area_and_reflectance(room);
    let flux: f64 = fixtures.iter().zip(dims).map(|(f, d)| f.spec.flux * d).sum();
    total + flux * rho / (area * (1.0 - rho))
}

pub fn field(room: &RoomModel, fixtures: &[PlacedFixture], dims: &[f64], spacing: f64, height: f64) -> Vec<([f64; 3], f64)> {
    workplane_points(room, spacing, height)
        .into_iter()
        .map(|p| (p, point_lux(room, fixtures, dims, p)))
        .collect()
}

/// Flux recovered by integrating `I0 cos^m` over the lower hemisphere with
/// composite Simpson's rule in the polar angle.
pub fn hemisphere_flux(intensity: impl Fn(f64) -> f64, steps: usize) -> f64 {
    let steps = steps + steps % 2;
    let h = std::f64::consts::FRAC_PI_2 / steps as f64;
    let g = |theta: f64| intensity(theta.cos()) * 2.0 * std::f64::consts::PI * theta.sin();
    let mut sum = g(0.0) + g(std::f64::consts::FRAC_PI_2);
    for k in 1..steps {
        sum += g(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

pub fn vec3(p: [f64; 3]) -> Vec3 {
    Vec3::new(p[0], p[1], p[2])
}
