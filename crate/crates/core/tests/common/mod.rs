//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::path::Path;

use posesynth::camera::{project_with_near, Intrinsics, ViewTransform};
use posesynth::dataset::{write_manifest, ManifestRecord};
use posesynth::geometry::{Orientation, Pose};
use posesynth::pointcloud::PointCloud;
use posesynth::renderer::{apply_shader, fill_skybox, Image, RenderOptions};
use posesynth::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

type M = [[f64; 3]; 3];

fn matmul(a: &M, b: &M) -> M {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// R_Y(yaw) · R_X(pitch) · R_Z(roll), each factor written out by hand.
pub fn elementary_product(pitch: f64, yaw: f64, roll: f64) -> M {
    let (p, y, r) = (pitch.to_radians(), yaw.to_radians(), roll.to_radians());
    let ry = [[y.cos(), 0.0, y.sin()], [0.0, 1.0, 0.0], [-y.sin(), 0.0, y.cos()]];
    let rx = [[1.0, 0.0, 0.0], [0.0, p.cos(), -p.sin()], [0.0, p.sin(), p.cos()]];
    let rz = [[r.cos(), -r.sin(), 0.0], [r.sin(), r.cos(), 0.0], [0.0, 0.0, 1.0]];
    matmul(&matmul(&ry, &rx), &rz)
}

/// Unit quaternion `[w, x, y, z]` for the same Y·X·Z sequence.
pub fn quat_from_euler(o: &Orientation) -> [f64; 4] {
    let axis = |deg: f64, a: usize| {
        let h = deg.to_radians() / 2.0;
        let mut q = [h.cos(), 0.0, 0.0, 0.0];
        q[1 + a] = h.sin();
        q
    };
    qmul(&qmul(&axis(o.yaw, 1), &axis(o.pitch, 0)), &axis(o.roll, 2))
}

pub fn qmul(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

/// Angle of the relative quaternion `conj(qa)·qb`, degrees.
pub fn quat_geodesic_deg(a: &Orientation, b: &Orientation) -> f64 {
    let qa = quat_from_euler(a);
    let qb = quat_from_euler(b);
    let rel = qmul(&[qa[0], -qa[1], -qa[2], -qa[3]], &qb);
    let v = (rel[1] * rel[1] + rel[2] * rel[2] + rel[3] * rel[3]).sqrt();
    2.0 * v.atan2(rel[0].abs()).to_degrees()
}

/// Sorts splats far to near and paints discs one after another.
///
/// Equal depths paint the higher index first so the lower index ends on top.
pub fn painter_render<T: Real>(
    cloud: &PointCloud<T>,
    intr: &Intrinsics<T>,
    pose: &Pose<T>,
    opts: &RenderOptions<T>,
) -> Image {
    let view = ViewTransform::from_pose(pose).unwrap();
    let mut img = fill_skybox(intr, pose, opts.skybox).unwrap();
    let mut visible: Vec<(T, usize, T, T)> = cloud
        .positions()
        .iter()
        .enumerate()
        .filter_map(|(i, p)| project_with_near(intr, &view, *p, opts.near_plane).map(|pr| (pr.depth, i, pr.u, pr.v)))
        .collect();
    visible.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(b.1.cmp(&a.1)));

    let (w, h) = (intr.width as i64, intr.height as i64);
    for (depth, i, u, v) in visible {
        let r = (opts.splat_radius_px * opts.reference_depth / depth)
            .max(T::one())
            .min(opts.max_splat_px);
        let cc = u.floor().to_i64().unwrap();
        let cr = h - 1 - v.floor().to_i64().unwrap();
        let reach = r.ceil().to_i64().unwrap();
        for row in cr - reach..=cr + reach {
            for col in cc - reach..=cc + reach {
                if row < 0 || row >= h || col < 0 || col >= w {
                    continue;
                }
                let d2 = ((col - cc) * (col - cc) + (row - cr) * (row - cr)) as f64;
                if T::lit(d2) <= r * r {
                    img.set(col as u32, row as u32, cloud.colors()[i]);
                }
            }
        }
    }
    apply_shader(&img, &opts.shader).unwrap()
}

pub fn random_cloud(rng: &mut impl Rng, n: usize, extent: f64) -> PointCloud {
    let mut c = PointCloud::with_capacity(n);
    for _ in 0..n {
        let p = [0; 3].map(|_| rng.random_range(-extent..extent));
        c.push(p.into(), [rng.random(), rng.random(), rng.random()]);
    }
    c
}

pub fn random_image(rng: &mut impl Rng, w: u32, h: u32) -> Image {
    let px = (0..w * h * 3).map(|_| rng.random()).collect();
    Image::from_raw(w, h, px).unwrap()
}

/// Writes images and a manifest under `root`, returning the records.
pub fn write_fixture_split(root: &Path, name: &str, images: &[Image], poses: &[Pose]) -> Vec<ManifestRecord> {
    std::fs::create_dir_all(root.join("images").join(name)).unwrap();
    let records: Vec<ManifestRecord> = images
        .iter()
        .zip(poses)
        .enumerate()
        .map(|(i, (img, pose))| {
            let rel = format!("images/{name}/{i:04}.png");
            img.save_png(root.join(&rel)).unwrap();
            ManifestRecord::new(rel, *pose)
        })
        .collect();
    write_manifest(&records, root.join(format!("{name}.csv"))).unwrap();
    records
}
