//! End-to-end tests of the `posekit` binary: flag handling, exit codes,
//! determinism, and the documented behavior of each subcommand.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nalgebra::Vector3;

use posekit::io;
use posekit::{
    synth_correspondences, CameraIntrinsics, ColoredPointCloud, ConfidenceModel, CorrSpec,
    RigidTransform, TriangleMesh,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_posekit"))
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("posekit-cli-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("spawn posekit")
}

fn assert_code(output: &Output, expected: i32) {
    assert_eq!(
        output.status.code(),
        Some(expected),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn cube_mesh(side: f64) -> TriangleMesh {
    let s = side / 2.0;
    let v = |x: f64, y: f64, z: f64| Vector3::new(x * s, y * s, z * s);
    TriangleMesh::new(
        vec![
            v(-1., -1., -1.),
            v(1., -1., -1.),
            v(1., 1., -1.),
            v(-1., 1., -1.),
            v(-1., -1., 1.),
            v(1., -1., 1.),
            v(1., 1., 1.),
            v(-1., 1., 1.),
        ],
        vec![
            [0, 1, 2],
            [0, 2, 3],
            [4, 6, 5],
            [4, 7, 6],
            [0, 4, 5],
            [0, 5, 1],
            [3, 2, 6],
            [3, 6, 7],
            [0, 3, 7],
            [0, 7, 4],
            [1, 5, 6],
            [1, 6, 2],
        ],
        None,
    )
    .unwrap()
}

#[test]
fn help_and_usage_exit_codes() {
    assert_code(&run(bin().arg("--help")), 0);
    assert_code(&run(bin().args(["eval", "--help"])), 0);
    assert_code(&run(bin().arg("--version")), 0);
    assert_code(&run(bin().args(["eval", "--no-such-flag"])), 64);
    assert_code(&run(bin().arg("frobnicate")), 64);
    assert_code(&run(bin().arg("fit")), 64);
}

/// Writes a tiny ground-truth setup: one cube object, three scenes with
/// non-trivial poses. Returns (gt path, meshes dir).
fn write_eval_fixture(dir: &Path) -> (PathBuf, PathBuf) {
    let meshes = dir.join("meshes");
    std::fs::create_dir_all(&meshes).unwrap();
    io::save_mesh(meshes.join("cube.ply"), &cube_mesh(0.08)).unwrap();

    let mut gt = Vec::new();
    for i in 0..3 {
        let pose = RigidTransform::new(
            *posekit::random_rotation(posekit::RotationMode::AnyAxis, i).rotation(),
            Vector3::new(0.01 * i as f64, -0.02, 0.6),
        )
        .unwrap();
        gt.push(io::GroundTruthRecord::from_pose(format!("s{i}"), "cube", &pose));
    }
    let gt_path = dir.join("gt.jsonl");
    io::save_ground_truth(&gt_path, &gt).unwrap();
    (gt_path, meshes)
}

fn predictions_from_gt(gt_path: &Path, pred_path: &Path, skip_scene: Option<&str>) {
    let gt = io::load_ground_truth(gt_path).unwrap();
    let predictions: Vec<io::PredictionRecord> = gt
        .iter()
        .filter(|r| Some(r.scene_id.as_str()) != skip_scene)
        .map(|r| io::PredictionRecord {
            scene_id: r.scene_id.clone(),
            object_id: r.object_id.clone(),
            rotation: r.rotation,
            translation: r.translation,
            score: 1.0,
        })
        .collect();
    io::save_predictions(pred_path, &predictions).unwrap();
}

#[test]
fn eval_perfect_predictions_score_full_auc() {
    let dir = scratch("eval-perfect");
    let (gt_path, meshes) = write_eval_fixture(&dir);
    let pred_path = dir.join("pred.jsonl");
    predictions_from_gt(&gt_path, &pred_path, None);

    let out = dir.join("report");
    let output = run(bin().args([
        "eval",
        "--gt",
        gt_path.to_str().unwrap(),
        "--pred",
        pred_path.to_str().unwrap(),
        "--meshes",
        meshes.to_str().unwrap(),
        "--metrics",
        "add,adds,acpd,iadd",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_code(&output, 0);
    let summary = io::read_report_summary(dir.join("report.json")).unwrap();
    for metric in posekit::MetricKind::ALL {
        assert_eq!(summary.overall_auc[&metric], 1.0);
        assert_eq!(summary.per_object_auc["cube"][&metric], 1.0);
    }
}

#[test]
fn eval_missing_prediction_scores_infinity() {
    let dir = scratch("eval-missing");
    let (gt_path, meshes) = write_eval_fixture(&dir);
    let pred_path = dir.join("pred.jsonl");
    predictions_from_gt(&gt_path, &pred_path, Some("s1"));

    let out = dir.join("report");
    assert_code(
        &run(bin().args([
            "eval",
            "--gt",
            gt_path.to_str().unwrap(),
            "--pred",
            pred_path.to_str().unwrap(),
            "--meshes",
            meshes.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])),
        0,
    );
    let summary = io::read_report_summary(dir.join("report.json")).unwrap();
    let expected = 2.0 / 3.0;
    for metric in [posekit::MetricKind::Add, posekit::MetricKind::Iadd] {
        assert!((summary.overall_auc[&metric] - expected).abs() < 1e-12);
    }
    let csv = std::fs::read_to_string(dir.join("report.csv")).unwrap();
    assert!(csv.contains("s1,cube,add,inf"));
}

#[test]
fn eval_runs_are_byte_identical() {
    let dir = scratch("eval-det");
    let (gt_path, meshes) = write_eval_fixture(&dir);
    let pred_path = dir.join("pred.jsonl");
    predictions_from_gt(&gt_path, &pred_path, None);
    for out in ["a", "b"] {
        assert_code(
            &run(bin().args([
                "eval",
                "--gt",
                gt_path.to_str().unwrap(),
                "--pred",
                pred_path.to_str().unwrap(),
                "--meshes",
                meshes.to_str().unwrap(),
                "--points",
                "sample:256",
                "--out",
                dir.join(out).to_str().unwrap(),
            ])),
            0,
        );
    }
    assert_eq!(
        std::fs::read(dir.join("a.json")).unwrap(),
        std::fs::read(dir.join("b.json")).unwrap()
    );
    assert_eq!(
        std::fs::read(dir.join("a.csv")).unwrap(),
        std::fs::read(dir.join("b.csv")).unwrap()
    );
}

#[test]
fn eval_unmatched_ids_exit_2() {
    let dir = scratch("eval-unmatched");
    let (gt_path, meshes) = write_eval_fixture(&dir);

    // A prediction no ground truth mentions.
    let pred_path = dir.join("pred.jsonl");
    io::save_predictions(
        &pred_path,
        &[io::PredictionRecord::from_pose(
            "sX",
            "cube",
            &RigidTransform::identity(),
            1.0,
        )],
    )
    .unwrap();
    assert_code(
        &run(bin().args([
            "eval",
            "--gt",
            gt_path.to_str().unwrap(),
            "--pred",
            pred_path.to_str().unwrap(),
            "--meshes",
            meshes.to_str().unwrap(),
            "--out",
            dir.join("r").to_str().unwrap(),
        ])),
        2,
    );

    // A ground-truth object with no mesh file.
    let empty_meshes = dir.join("no-meshes");
    std::fs::create_dir_all(&empty_meshes).unwrap();
    predictions_from_gt(&gt_path, &pred_path, None);
    assert_code(
        &run(bin().args([
            "eval",
            "--gt",
            gt_path.to_str().unwrap(),
            "--pred",
            pred_path.to_str().unwrap(),
            "--meshes",
            empty_meshes.to_str().unwrap(),
            "--out",
            dir.join("r").to_str().unwrap(),
        ])),
        2,
    );
}

fn write_corr_fixture(dir: &Path, inlier_ratio: f64, seed: u64) -> (PathBuf, RigidTransform) {
    let mut positions = Vec::new();
    for i in 0..200 {
        let a = i as f64 * 0.37;
        positions.push(Vector3::new(
            0.05 * a.cos(),
            0.05 * a.sin(),
            0.04 * ((i % 17) as f64 / 17.0 - 0.5),
        ));
    }
    let cloud = ColoredPointCloud::new(positions).unwrap();
    let pose = RigidTransform::new(
        *posekit::random_rotation(posekit::RotationMode::AnyAxis, seed).rotation(),
        Vector3::new(0.03, -0.05, 0.55),
    )
    .unwrap();
    let all: Vec<usize> = (0..cloud.len()).collect();
    let corr = synth_correspondences(
        &cloud,
        &pose,
        &all,
        &CorrSpec {
            n_pairs: 400,
            inlier_ratio,
            noise_sigma: 0.0,
            confidence_model: ConfidenceModel::Oracle,
            seed,
        },
    )
    .unwrap();
    let path = dir.join("pairs.corr");
    io::save_correspondences(&path, &corr).unwrap();
    (path, pose)
}

#[test]
fn fit_lsq_recovers_the_generating_pose() {
    let dir = scratch("fit-lsq");
    let (corr_path, pose) = write_corr_fixture(&dir, 1.0, 3);
    let out = dir.join("pose.jsonl");
    assert_code(
        &run(bin().args([
            "fit",
            "--corr",
            corr_path.to_str().unwrap(),
            "--method",
            "lsq",
            "--out",
            out.to_str().unwrap(),
        ])),
        0,
    );
    let records = io::load_predictions(&out).unwrap();
    assert_eq!(records.len(), 1);
    assert!(records[0].to_pose().unwrap().max_abs_diff(&pose) <= 1e-9);
}

#[test]
fn fit_prosac_is_reproducible() {
    let dir = scratch("fit-det");
    let (corr_path, pose) = write_corr_fixture(&dir, 0.3, 5);
    for out in ["a.jsonl", "b.jsonl"] {
        assert_code(
            &run(bin().args([
                "fit",
                "--corr",
                corr_path.to_str().unwrap(),
                "--method",
                "prosac",
                "--seed",
                "42",
                "--out",
                dir.join(out).to_str().unwrap(),
            ])),
            0,
        );
    }
    let a = std::fs::read(dir.join("a.jsonl")).unwrap();
    assert_eq!(a, std::fs::read(dir.join("b.jsonl")).unwrap());
    let records = io::load_predictions(dir.join("a.jsonl")).unwrap();
    assert!(records[0].to_pose().unwrap().max_abs_diff(&pose) <= 1e-6);
}

#[test]
fn fit_median_iterations_prosac_never_worse() {
    let dir = scratch("fit-paired");
    let (corr_path, _) = write_corr_fixture(&dir, 0.3, 7);
    let parse_iterations = |output: &Output| -> u64 {
        let stdout = String::from_utf8_lossy(&output.stdout);
        let line = stdout.lines().find(|l| l.contains("iterations")).unwrap();
        line.split_whitespace()
            .skip_while(|t| *t != "iterations")
            .nth(1)
            .unwrap()
            .parse()
            .unwrap()
    };
    let mut prosac = Vec::new();
    let mut ransac = Vec::new();
    for seed in 0..11u32 {
        for (method, bucket) in [("prosac", &mut prosac), ("ransac", &mut ransac)] {
            let output = run(bin().args([
                "fit",
                "--corr",
                corr_path.to_str().unwrap(),
                "--method",
                method,
                "--seed",
                &seed.to_string(),
                "--out",
                dir.join(format!("{method}-{seed}.jsonl")).to_str().unwrap(),
            ]));
            assert_code(&output, 0);
            bucket.push(parse_iterations(&output));
        }
    }
    prosac.sort_unstable();
    ransac.sort_unstable();
    assert!(
        prosac[5] <= ransac[5],
        "median iterations: prosac {} ransac {}",
        prosac[5],
        ransac[5]
    );
}

#[test]
fn fit_failure_exits_3() {
    let dir = scratch("fit-fail");
    let path = dir.join("tiny.corr");
    std::fs::write(&path, "0 0 0 1 1 1 0.9\n0.01 0 0 1 1 1 0.9\n").unwrap();
    let output = run(bin().args([
        "fit",
        "--corr",
        path.to_str().unwrap(),
        "--method",
        "ransac",
        "--out",
        dir.join("pose.jsonl").to_str().unwrap(),
    ]));
    assert_code(&output, 3);
}

fn write_seg_fixture(dir: &Path) -> (PathBuf, PathBuf, PathBuf, usize) {
    let cam = CameraIntrinsics::new(500.0, 500.0, 64.0, 64.0, 128, 128).unwrap();
    let mut positions = Vec::new();
    for v in 30..54u32 {
        for u in 30..54u32 {
            positions.push(cam.back_project(u as f64, v as f64, 0.8));
        }
    }
    let blob_len = positions.len();
    for v in 90..110u32 {
        for u in 90..110u32 {
            positions.push(cam.back_project(u as f64, v as f64, 0.8));
        }
    }
    let cloud = ColoredPointCloud::new(positions).unwrap();
    let mut scores = vec![1.0; blob_len];
    scores.extend(vec![0.0; cloud.len() - blob_len]);

    let cloud_path = dir.join("scene.ply");
    let scores_path = dir.join("scores.bin");
    let cam_path = dir.join("cam.json");
    io::save_cloud(&cloud_path, &cloud).unwrap();
    io::save_scores(&scores_path, &scores).unwrap();
    io::save_intrinsics(&cam_path, &cam).unwrap();
    (cloud_path, scores_path, cam_path, blob_len)
}

#[test]
fn refine_seg_extracts_the_blob() {
    let dir = scratch("seg-blob");
    let (cloud_path, scores_path, cam_path, blob_len) = write_seg_fixture(&dir);
    let out = dir.join("segment.txt");
    let output = run(bin().args([
        "refine-seg",
        "--cloud",
        cloud_path.to_str().unwrap(),
        "--scores",
        scores_path.to_str().unwrap(),
        "--intrinsics",
        cam_path.to_str().unwrap(),
        "--sigma",
        "1.0",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_code(&output, 0);
    let indices = io::load_indices(&out).unwrap();
    assert_eq!(indices, (0..blob_len).collect::<Vec<_>>());
    assert!(String::from_utf8_lossy(&output.stdout).contains("components 1"));

    // Determinism: a second run writes identical bytes.
    let out2 = dir.join("segment2.txt");
    assert_code(
        &run(bin().args([
            "refine-seg",
            "--cloud",
            cloud_path.to_str().unwrap(),
            "--scores",
            scores_path.to_str().unwrap(),
            "--intrinsics",
            cam_path.to_str().unwrap(),
            "--sigma",
            "1.0",
            "--out",
            out2.to_str().unwrap(),
        ])),
        0,
    );
    assert_eq!(
        std::fs::read(&out).unwrap(),
        std::fs::read(&out2).unwrap()
    );
}

#[test]
fn refine_seg_degenerate_scores_exit_4() {
    let dir = scratch("seg-degenerate");
    let (cloud_path, _, cam_path, _) = write_seg_fixture(&dir);
    let cloud = io::load_cloud(&cloud_path).unwrap();
    let scores_path = dir.join("flat.bin");
    io::save_scores(&scores_path, &vec![0.0; cloud.len()]).unwrap();
    let output = run(bin().args([
        "refine-seg",
        "--cloud",
        cloud_path.to_str().unwrap(),
        "--scores",
        scores_path.to_str().unwrap(),
        "--intrinsics",
        cam_path.to_str().unwrap(),
        "--out",
        dir.join("segment.txt").to_str().unwrap(),
    ]));
    assert_code(&output, 4);
    assert!(String::from_utf8_lossy(&output.stderr).contains("degenerate histogram"));
}

#[test]
fn synth_zero_scenes_writes_an_empty_manifest() {
    let dir = scratch("synth-zero");
    let objects = dir.join("objects");
    std::fs::create_dir_all(&objects).unwrap();
    let out = dir.join("scenes");
    assert_code(
        &run(bin().args([
            "synth",
            "--objects",
            objects.to_str().unwrap(),
            "--n-scenes",
            "0",
            "--out",
            out.to_str().unwrap(),
        ])),
        0,
    );
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["scenes"].as_array().unwrap().len(), 0);
}

#[test]
fn synth_without_meshes_exits_2() {
    let dir = scratch("synth-nomesh");
    let objects = dir.join("objects");
    std::fs::create_dir_all(&objects).unwrap();
    assert_code(
        &run(bin().args([
            "synth",
            "--objects",
            objects.to_str().unwrap(),
            "--n-scenes",
            "2",
            "--out",
            dir.join("scenes").to_str().unwrap(),
        ])),
        2,
    );
}

#[test]
fn synth_ground_truth_closes_to_full_auc() {
    let dir = scratch("synth-closure");
    let objects = dir.join("objects");
    std::fs::create_dir_all(&objects).unwrap();
    io::save_mesh(objects.join("cube.ply"), &cube_mesh(0.08)).unwrap();
    let scenes = dir.join("scenes");
    assert_code(
        &run(bin().args([
            "synth",
            "--objects",
            objects.to_str().unwrap(),
            "--n-scenes",
            "3",
            "--seed",
            "5",
            "--out",
            scenes.to_str().unwrap(),
        ])),
        0,
    );
    // Reproducibility of the scene files themselves.
    let scenes2 = dir.join("scenes2");
    assert_code(
        &run(bin().args([
            "synth",
            "--objects",
            objects.to_str().unwrap(),
            "--n-scenes",
            "3",
            "--seed",
            "5",
            "--out",
            scenes2.to_str().unwrap(),
        ])),
        0,
    );
    assert_eq!(
        std::fs::read(scenes.join("scene_0000.ply")).unwrap(),
        std::fs::read(scenes2.join("scene_0000.ply")).unwrap()
    );
    assert_eq!(
        std::fs::read(scenes.join("gt.jsonl")).unwrap(),
        std::fs::read(scenes2.join("gt.jsonl")).unwrap()
    );

    // Feeding the emitted ground truth back as predictions is a perfect
    // result.
    let pred_path = dir.join("pred.jsonl");
    predictions_from_gt(&scenes.join("gt.jsonl"), &pred_path, None);
    assert_code(
        &run(bin().args([
            "eval",
            "--gt",
            scenes.join("gt.jsonl").to_str().unwrap(),
            "--pred",
            pred_path.to_str().unwrap(),
            "--meshes",
            objects.to_str().unwrap(),
            "--out",
            dir.join("report").to_str().unwrap(),
        ])),
        0,
    );
    let summary = io::read_report_summary(dir.join("report.json")).unwrap();
    for metric in [posekit::MetricKind::Add, posekit::MetricKind::Iadd] {
        assert_eq!(summary.overall_auc[&metric], 1.0);
    }
}
