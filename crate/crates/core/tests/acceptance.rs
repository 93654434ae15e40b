//! End-to-end acceptance checks. Prints one `[PASS]` or `[FAIL]` line per
//! criterion and exits nonzero if any hard criterion fails.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use common::{painter_render, quat_geodesic_deg, random_cloud, rng};
use posesynth::camera::Intrinsics;
use posesynth::cli;
use posesynth::dataset::{read_manifest, validate_splits, write_manifest, DatasetLayout, MeanImage, MEAN_FILE};
use posesynth::eval::{evaluate, format_cell, format_report, knn_predict_manifest, KnnIndex, Metrics};
use posesynth::geometry::{
    euler_to_rotmat, geodesic_angle, normalize_orientation, pose_loss, rotmat_to_euler, wrap_degrees, LossWeights,
    Orientation, Pose,
};
use posesynth::pointcloud::{procedural_cloud, PointCloud, RoomSpec};
use posesynth::renderer::{splat_render, RenderOptions, ShaderPreset, SkyboxPreset};
use rand::Rng;
use sha2::{Digest, Sha256};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn renderer_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2024);
    let presets = [ShaderPreset::identity(), ShaderPreset::noon(), ShaderPreset::dusk(), ShaderPreset::overcast()];
    let skies = [SkyboxPreset::None, SkyboxPreset::Noon, SkyboxPreset::Dusk];
    let mut mismatches = 0;
    let mut splats_drawn = 0usize;
    for case in 0..200 {
        let n = r.random_range(1..=1000);
        let extent = r.random_range(1.0..8.0);
        let cloud = random_cloud(&mut r, n, extent);
        let (w, h) = (r.random_range(16..160), r.random_range(16..120));
        let intr = Intrinsics::from_fov(r.random_range(60.0..110.0), w, h).unwrap();
        let pos = [0; 3].map(|_| r.random_range(-2.0..2.0));
        let pose = Pose::new(
            pos.into(),
            Orientation::new(r.random_range(-90.0..90.0), r.random_range(-180.0..180.0), r.random_range(-180.0..180.0)),
        )
        .unwrap();
        let opts = RenderOptions {
            splat_radius_px: r.random_range(0.0..4.0),
            reference_depth: r.random_range(0.5..4.0),
            max_splat_px: r.random_range(1.0..10.0),
            near_plane: 0.01,
            skybox: skies[case % 3],
            shader: presets[case % 4].clone(),
        };
        let fast = splat_render(&cloud, &intr, &pose, &opts).unwrap();
        let slow = painter_render(&cloud, &intr, &pose, &opts);
        let bg = posesynth::renderer::fill_skybox(&intr, &pose, opts.skybox).unwrap();
        splats_drawn += fast.pixels().chunks(3).zip(bg.pixels().chunks(3)).filter(|(a, b)| a != b).count();
        if fast != slow {
            mismatches += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        mismatches == 0 && secs <= 60.0 && splats_drawn > 0,
        format!("200 random cases, {mismatches} mismatching images, {secs:.1} s (limit 60 s)"),
    )
}

fn geometry_suite() -> Outcome {
    let mut r = rng(7);
    let mut worst_rt: f64 = 0.0;
    for _ in 0..100_000 {
        let o: Orientation = Orientation::new(
            r.random_range(-89.9..89.9),
            r.random_range(-540.0..540.0),
            r.random_range(-540.0..540.0),
        );
        let back = rotmat_to_euler(&euler_to_rotmat(&o).unwrap()).orientation;
        let want = normalize_orientation(&o);
        worst_rt = worst_rt
            .max((back.pitch - want.pitch).abs())
            .max(wrap_degrees(back.yaw - want.yaw).abs())
            .max(wrap_degrees(back.roll - want.roll).abs());
    }
    let mut worst_q: f64 = 0.0;
    let any = |r: &mut rand_chacha::ChaCha8Rng| {
        Orientation::new(r.random_range(-90.0..90.0), r.random_range(-180.0..180.0), r.random_range(-180.0..180.0))
    };
    for _ in 0..10_000 {
        let (a, b) = (any(&mut r), any(&mut r));
        worst_q = worst_q.max((geodesic_angle(&a, &b).unwrap() - quat_geodesic_deg(&a, &b)).abs());
    }
    let w = LossWeights::default();
    let p = |a: [f64; 6]| Pose::from_array(a);
    let wrap = pose_loss(&p([0.0, 0.0, 0.0, 0.0, 179.0, 0.0]), &p([0.0, 0.0, 0.0, 0.0, -179.0, 0.0]), &w);
    let tri = pose_loss(&p([3.0, 4.0, 0.0, 0.0, 0.0, 0.0]), &p([0.0; 6]), &w);
    let zero = pose_loss(&p([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]), &p([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]), &w);
    outcome(
        worst_rt <= 1e-7 && worst_q <= 1e-6 && wrap == 2.0 && tri == 5.0 && zero == 0.0,
        format!(
            "round trip max {worst_rt:.2e} deg (limit 1e-7), quaternion oracle max {worst_q:.2e} deg over 1e4 pairs \
             (limit 1e-6), wrap case {wrap}, 3-4-5 case {tri}"
        ),
    )
}

const E2E_CONFIG: &str = r#"{
  "procedural": {"room": {"width": 10, "height": 4, "depth": 10, "points": 100000}, "seed": 1234},
  "camera": {"fov_deg": 90, "width": 224, "height": 224},
  "grid": {"step_x": 1, "step_z": 1, "height": 1.6},
  "orientations": {"yaw_count": 8, "pitch_values": [0]},
  "holdout_every": 7,
  "output": "dataset"
}"#;

fn end_to_end(work: &Path, layouts: &mut Vec<std::path::PathBuf>) -> Outcome {
    let start = Instant::now();
    let cfg = work.join("e2e.json");
    fs::write(&cfg, E2E_CONFIG).unwrap();
    let code = cli::run(["posesynth", "--quiet", "--threads", "1", "generate", cfg.to_str().unwrap()]);
    if code != 0 {
        return outcome(false, format!("generate exited {code}"));
    }
    let root = work.join("dataset");
    layouts.push(root.clone());
    let train = read_manifest(root.join("train.csv")).unwrap();
    let test_b = read_manifest(root.join("testB.csv")).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let metrics: Metrics = pool.install(|| {
        let mean = MeanImage::read(root.join(MEAN_FILE)).unwrap();
        let index = KnnIndex::build(&train, &root, Some(mean), 16).unwrap();
        let preds = knn_predict_manifest(&index, &test_b, &root).unwrap();
        write_manifest(&preds, root.join("preds_testB.csv")).unwrap();
        evaluate(&preds, &test_b).unwrap()
    });
    let secs = start.elapsed().as_secs_f64();
    println!("{}", format_report(&[("testB (knn)".into(), metrics)]).trim_end());
    let images = train.len() + test_b.len();
    outcome(
        metrics.median_pos_m <= 1.0 && metrics.median_ori_deg <= 45.0 && secs <= 180.0 && (700..=900).contains(&images),
        format!(
            "{images} images ({} train, {} testB), median {} (limits 1.00m, 45.00°), {secs:.1} s single-threaded (limit 180 s)",
            train.len(),
            test_b.len(),
            format_cell(metrics.median_pos_m, metrics.median_ori_deg)
        ),
    )
}

fn hash_tree(root: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                let digest = Sha256::digest(fs::read(&p).unwrap());
                out.insert(rel, digest.iter().map(|b| format!("{b:02x}")).collect());
            }
        }
    }
    out
}

const DET_CONFIG: &str = r#"{
  "procedural": {"room": {"width": 6, "height": 3, "depth": 6, "points": 30000}, "seed": 99},
  "camera": {"fov_deg": 75, "width": 96, "height": 72},
  "orientations": {"yaw_count": 6, "pitch_values": [-10, 0, 10]},
  "render": {"skybox": "dusk", "shader": "dusk"},
  "holdout_every": 5,
  "output": "unused"
}"#;

fn determinism(work: &Path, layouts: &mut Vec<std::path::PathBuf>) -> Outcome {
    let cfg = work.join("det.json");
    fs::write(&cfg, DET_CONFIG).unwrap();
    let mut trees = Vec::new();
    for threads in ["1", "8"] {
        let out = work.join(format!("det_t{threads}"));
        let code = cli::run([
            "posesynth",
            "--quiet",
            "--threads",
            threads,
            "generate",
            cfg.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
        ]);
        if code != 0 {
            return outcome(false, format!("generate --threads {threads} exited {code}"));
        }
        layouts.push(out.clone());
        trees.push(hash_tree(&out));
    }
    let differing: Vec<&String> = trees[0]
        .iter()
        .filter(|(k, v)| trees[1].get(*k) != Some(*v))
        .map(|(k, _)| k)
        .collect();
    let same_files = trees[0].keys().eq(trees[1].keys());
    outcome(
        differing.is_empty() && same_files && trees[0].len() > 100,
        format!(
            "--threads 1 vs --threads 8: {} files hashed, {} differ",
            trees[0].len(),
            differing.len()
        ),
    )
}

fn split_integrity(layouts: &[std::path::PathBuf]) -> Outcome {
    let mut all_pass = !layouts.is_empty();
    for root in layouts {
        all_pass &= validate_splits(&DatasetLayout::open(root).unwrap()).passed();
    }
    let Some(root) = layouts.last() else {
        return outcome(false, "no generated layouts");
    };
    let clean = cli::run(["posesynth", "--quiet", "validate", root.to_str().unwrap()]);
    let train = read_manifest(root.join("train.csv")).unwrap();
    let mut test_b = read_manifest(root.join("testB.csv")).unwrap();
    test_b.push(train[train.len() / 2].clone());
    write_manifest(&test_b, root.join("testB.csv")).unwrap();
    let detected = !validate_splits(&DatasetLayout::open(root).unwrap()).passed();
    let code = cli::run(["posesynth", "--quiet", "validate", root.to_str().unwrap()]);
    outcome(
        all_pass && clean == 0 && detected && code != 0,
        format!(
            "{} generated layouts pass; injected duplicate detected: {detected}, validate exit {clean} then {code}",
            layouts.len()
        ),
    )
}

fn format_fidelity() -> Outcome {
    let table = [
        (Metrics { median_pos_m: 1.54, mean_pos_m: 2.25, median_ori_deg: 0.92, mean_ori_deg: 1.59, count: 150 }, "1.54m, 0.92°", "2.25m, 1.59°"),
        (Metrics { median_pos_m: 0.91, mean_pos_m: 1.01, median_ori_deg: 0.39, mean_ori_deg: 1.44, count: 19_000 }, "0.91m, 0.39°", "1.01m, 1.44°"),
    ];
    let mut ok = true;
    for (m, median, mean) in &table {
        let report = format_report(&[("fixture".into(), *m)]);
        let lines: Vec<&str> = report.lines().collect();
        ok &= lines.len() == 4 && lines[2].contains(median) && lines[3].contains(mean);
    }
    ok &= format_cell(0.0, 0.0) == "0.00m, 0.00°";
    outcome(ok, "cells \"1.54m, 0.92°\" and \"0.91m, 0.39°\" reproduced from fixture metrics")
}

fn throughput() -> Outcome {
    let cloud: PointCloud = procedural_cloud(
        5,
        &RoomSpec {
            width: 20.0,
            height: 5.0,
            depth: 20.0,
            points: 1_000_000,
        },
    )
    .unwrap();
    let intr = Intrinsics::from_fov(90.0, 224, 224).unwrap();
    let opts = RenderOptions::default();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let frames = 20;
    let start = Instant::now();
    pool.install(|| {
        for k in 0..frames {
            let pose = Pose::from_array([0.0, 1.6, 0.0, 0.0, 360.0 * k as f64 / frames as f64, 0.0]);
            std::hint::black_box(splat_render(&cloud, &intr, &pose, &opts).unwrap());
        }
    });
    let rate = frames as f64 / start.elapsed().as_secs_f64().max(1e-9);
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    outcome(
        rate >= 5.0,
        format!("{rate:.1} images/s at 224x224, 1M points, 4 threads on {cores} available cores (soft target 5/s)"),
    )
}

fn main() {
    // cargo passes harness flags such as --nocapture or a name filter; a
    // filter that names no acceptance criterion skips the suite
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !filter.is_empty() && !filter.iter().any(|f| "acceptance".contains(f.as_str())) {
        return;
    }
    let work = tempfile::tempdir().unwrap();
    let mut layouts = Vec::new();
    let total = Instant::now();

    let mut results: Vec<(&str, bool, Outcome)> = Vec::new();
    results.push(("renderer oracle equivalence", true, renderer_oracle()));
    results.push(("geometry suite", true, geometry_suite()));
    results.push(("end-to-end localization", true, end_to_end(work.path(), &mut layouts)));
    results.push(("determinism across thread counts", true, determinism(work.path(), &mut layouts)));
    results.push(("split integrity", true, split_integrity(&layouts)));
    results.push(("format fidelity", true, format_fidelity()));
    results.push(("throughput (soft)", false, throughput()));

    let mut failed = 0;
    for (name, hard, o) in &results {
        let tag = match (o.passed, hard) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "SOFT-MISS",
        };
        println!("[{tag}] {name}: {}", o.detail);
        failed += (!o.passed && *hard) as usize;
    }
    println!(
        "acceptance: {} of {} hard criteria passed in {:.1?}",
        results.iter().filter(|r| r.1 && r.2.passed).count(),
        results.iter().filter(|r| r.1).count(),
        Duration::from_secs_f64(total.elapsed().as_secs_f64())
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
