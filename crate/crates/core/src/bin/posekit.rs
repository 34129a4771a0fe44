//! Command-line surface for the pose toolkit: `eval`, `fit`,
//! `refine-seg` and `synth`.
//!
//! Exit codes: 0 success, 2 input mismatch or unreadable input, 3 fit
//! failure, 4 degenerate data, 64 usage error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use posekit::io;
use posekit::{
    evaluate_batch, filter_by_confidence, least_squares_fit, prosac_fit, ransac_fit,
    refine_segmentation, render_scene, sample_mesh_surface, synth_correspondences, BatchInstance,
    CameraIntrinsics, ColoredPointCloud, ConfidenceModel, CorrSpec, Error, EvaluationInstance,
    FitConfig, MetricConfig, MetricKind, Placement, RigidTransform, RotationMode, SceneSpec,
    SymmetryAnnotation, TriangleMesh,
};

#[derive(Parser)]
#[command(name = "posekit", version, about = "6D pose evaluation and estimation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score predicted poses against ground truth and write a report.
    Eval(EvalArgs),
    /// Compute a 6D pose from a scored correspondence file.
    Fit(FitArgs),
    /// Refine a per-point heatmap into a clean scene segment.
    RefineSeg(RefineSegArgs),
    /// Generate synthetic scenes, ground truth and correspondences.
    Synth(SynthArgs),
}

#[derive(clap::Args)]
struct EvalArgs {
    /// Ground-truth pose records (JSON lines).
    #[arg(long)]
    gt: PathBuf,
    /// Predicted pose records (JSON lines).
    #[arg(long)]
    pred: PathBuf,
    /// Directory of object meshes named <object_id>.ply or .obj.
    #[arg(long)]
    meshes: PathBuf,
    /// Symmetry annotation file; objects without an entry count as
    /// asymmetric.
    #[arg(long)]
    symmetry: Option<PathBuf>,
    /// Comma-separated metric list from add, adds, acpd, iadd.
    #[arg(long, default_value = "add,adds,iadd")]
    metrics: String,
    /// Angle samples per continuous symmetry axis.
    #[arg(long, default_value_t = 360)]
    n_axis_samples: usize,
    /// Object points fed to the metrics: `vertices` or `sample:<n>`.
    #[arg(long, default_value = "vertices")]
    points: String,
    /// Output prefix; writes <prefix>.json and <prefix>.csv.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FitMethod {
    Lsq,
    Ransac,
    Prosac,
}

#[derive(clap::Args)]
struct FitArgs {
    /// Correspondence file (object xyz, scene xyz, confidence per line).
    #[arg(long)]
    corr: PathBuf,
    #[arg(long, value_enum)]
    method: FitMethod,
    #[arg(long, default_value_t = 0.8)]
    confidence_threshold: f64,
    /// Inlier residual threshold in meters.
    #[arg(long, default_value_t = 0.010)]
    inlier_threshold: f64,
    #[arg(long, default_value_t = 20000)]
    max_iterations: usize,
    #[arg(long, default_value_t = 0.999)]
    success_confidence: f64,
    #[arg(long, default_value_t = 3)]
    local_opt_rounds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ids stamped into the output record.
    #[arg(long, default_value = "scene")]
    scene_id: String,
    #[arg(long, default_value = "object")]
    object_id: String,
    /// Output pose record file (JSON lines).
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct RefineSegArgs {
    /// Scene cloud (PLY).
    #[arg(long)]
    cloud: PathBuf,
    /// Per-point score file (binary).
    #[arg(long)]
    scores: PathBuf,
    /// Camera intrinsics (JSON).
    #[arg(long)]
    intrinsics: PathBuf,
    /// Gaussian smoothing sigma in pixels.
    #[arg(long, default_value_t = 2.0)]
    sigma: f64,
    /// Minimum connected-component size in pixels.
    #[arg(long, default_value_t = 50)]
    min_size: usize,
    /// Output index file, one point index per line.
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct SynthArgs {
    /// Directory of object meshes (.ply/.obj).
    #[arg(long)]
    objects: PathBuf,
    #[arg(long)]
    n_scenes: usize,
    /// Depth noise sigma in meters.
    #[arg(long, default_value_t = 0.001)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Also emit correspondence files: `<inlier_ratio>,<noise>,<model>`
    /// with model `oracle` or `noisy:<overlap>`.
    #[arg(long)]
    corr: Option<String>,
    /// Pairs per correspondence file.
    #[arg(long, default_value_t = 1000)]
    corr_pairs: usize,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => std::process::exit(0),
                _ => std::process::exit(64),
            }
        }
    };
    let result = match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Fit(args) => cmd_fit(args),
        Command::RefineSeg(args) => cmd_refine_seg(args),
        Command::Synth(args) => cmd_synth(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::FitFailed | Error::InsufficientCorrespondences(_) => 3,
        Error::DegenerateHistogram
        | Error::DegenerateConfiguration
        | Error::DegenerateMesh
        | Error::InfiniteGroundTruthSet
        | Error::NoFiniteExpansion
        | Error::ExpansionCapExceeded(_)
        | Error::NothingToRender => 4,
        _ => 2,
    }
}

/// Object points handed to the metrics: mesh vertices or a fixed-seed
/// surface sampling.
enum PointsMode {
    Vertices,
    Sample(usize),
}

fn parse_points_mode(text: &str) -> Result<PointsMode, Error> {
    if text == "vertices" {
        return Ok(PointsMode::Vertices);
    }
    if let Some(n) = text.strip_prefix("sample:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad sample count in '{text}'")))?;
        if n == 0 {
            return Err(Error::InvalidInput("sample count must be positive".into()));
        }
        return Ok(PointsMode::Sample(n));
    }
    Err(Error::InvalidInput(format!(
        "--points must be 'vertices' or 'sample:<n>', got '{text}'"
    )))
}

fn mesh_path_for(dir: &Path, object_id: &str) -> Result<PathBuf, Error> {
    for ext in ["ply", "obj"] {
        let candidate = dir.join(format!("{object_id}.{ext}"));
        if candidate.exists() {
            return Ok(candidate);
        }
    }
    Err(Error::UnknownObject(object_id.to_string()))
}

fn cmd_eval(args: EvalArgs) -> Result<(), Error> {
    let mut metrics: Vec<MetricKind> = args
        .metrics
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    let mut seen = std::collections::BTreeSet::new();
    metrics.retain(|m| seen.insert(*m));
    if metrics.is_empty() {
        return Err(Error::InvalidInput("no metrics requested".into()));
    }
    let points_mode = parse_points_mode(&args.points)?;

    let gt_records = io::load_ground_truth(&args.gt)?;
    let predictions = io::load_predictions(&args.pred)?;
    let symmetries = match &args.symmetry {
        Some(path) => {
            let (map, warnings) = io::load_symmetry(path)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            map
        }
        None => BTreeMap::new(),
    };

    // One object cloud and AUC bound per referenced object.
    let mut object_clouds: BTreeMap<String, ColoredPointCloud> = BTreeMap::new();
    let mut d_max: BTreeMap<String, f64> = BTreeMap::new();
    for record in &gt_records {
        if object_clouds.contains_key(&record.object_id) {
            continue;
        }
        let mesh = io::load_mesh(mesh_path_for(&args.meshes, &record.object_id)?)?;
        let cloud = match points_mode {
            PointsMode::Vertices => mesh.vertex_cloud(),
            PointsMode::Sample(n) => sample_mesh_surface(&mesh, n, 0)?,
        };
        d_max.insert(
            record.object_id.clone(),
            0.5 * posekit::mesh_diagonal(&mesh),
        );
        object_clouds.insert(record.object_id.clone(), cloud);
    }

    let mut gt_keys: std::collections::BTreeSet<(String, String)> = std::collections::BTreeSet::new();
    for record in &gt_records {
        gt_keys.insert((record.scene_id.clone(), record.object_id.clone()));
    }
    // Highest score wins when a pair is predicted twice.
    let mut best_prediction: BTreeMap<(String, String), &io::PredictionRecord> = BTreeMap::new();
    for prediction in &predictions {
        let key = (prediction.scene_id.clone(), prediction.object_id.clone());
        if !gt_keys.contains(&key) {
            return Err(Error::UnknownObject(format!(
                "prediction {}/{} has no ground truth",
                prediction.scene_id, prediction.object_id
            )));
        }
        let replace = best_prediction
            .get(&key)
            .is_none_or(|existing| prediction.score > existing.score);
        if replace {
            best_prediction.insert(key, prediction);
        }
    }

    let mut items = Vec::with_capacity(gt_records.len());
    for record in &gt_records {
        let key = (record.scene_id.clone(), record.object_id.clone());
        let symmetry = symmetries
            .get(&record.object_id)
            .cloned()
            .unwrap_or_else(SymmetryAnnotation::none);
        let instance = match best_prediction.get(&key) {
            None => None,
            Some(prediction) => Some(EvaluationInstance::new(
                object_clouds[&record.object_id].clone(),
                record.to_pose()?,
                prediction.to_pose()?,
                symmetry,
            )?),
        };
        items.push(BatchInstance {
            scene_id: record.scene_id.clone(),
            object_id: record.object_id.clone(),
            instance,
        });
    }

    let cfg = MetricConfig {
        n_axis_samples: args.n_axis_samples,
        refine_continuous: false,
        metric_set: metrics,
    };
    let report = evaluate_batch(&items, &cfg, &d_max)?;

    let json_path = args.out.with_extension("json");
    let csv_path = args.out.with_extension("csv");
    io::write_report(&report, &json_path, &csv_path)?;
    for (metric, value) in &report.overall_auc {
        println!("auc {} {:.6}", metric.name(), value);
    }
    println!(
        "wrote {} and {} ({} instances)",
        json_path.display(),
        csv_path.display(),
        report.instances.len()
    );
    Ok(())
}

fn cmd_fit(args: FitArgs) -> Result<(), Error> {
    let corr = io::load_correspondences(&args.corr)?;
    let filtered = filter_by_confidence(&corr, args.confidence_threshold);
    let cfg = FitConfig {
        confidence_threshold: args.confidence_threshold,
        inlier_threshold: args.inlier_threshold,
        max_iterations: args.max_iterations,
        success_confidence: args.success_confidence,
        local_opt_rounds: args.local_opt_rounds,
        seed: args.seed,
    };
    let (pose, score) = match args.method {
        FitMethod::Lsq => {
            let pose = least_squares_fit(&filtered, Some(filtered.confidences()))?;
            println!("pairs {} (of {})", filtered.len(), corr.len());
            (pose, 1.0)
        }
        FitMethod::Ransac | FitMethod::Prosac => {
            let result = match args.method {
                FitMethod::Ransac => ransac_fit(&filtered, &cfg)?,
                _ => prosac_fit(&filtered, &cfg)?,
            };
            println!(
                "inliers {} / {} rms {:.6} iterations {} success_at {}",
                result.inlier_indices.len(),
                filtered.len(),
                result.inlier_rms,
                result.iterations_used,
                result.success_iteration
            );
            let score = result.inlier_indices.len() as f64 / filtered.len() as f64;
            (result.pose, score)
        }
    };
    let record = io::PredictionRecord::from_pose(&args.scene_id, &args.object_id, &pose, score);
    io::save_predictions(&args.out, &[record])?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_refine_seg(args: RefineSegArgs) -> Result<(), Error> {
    let cloud = io::load_cloud(&args.cloud)?;
    let scores = io::load_scores(&args.scores)?;
    let cam = io::load_intrinsics(&args.intrinsics)?;
    let result = refine_segmentation(&cloud, &scores, &cam, args.sigma, args.min_size)?;
    io::save_indices(&args.out, &result.point_indices)?;
    println!(
        "components {} points {} of {}",
        result.component_count,
        result.point_indices.len(),
        cloud.len()
    );
    println!("wrote {}", args.out.display());
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SceneEntry {
    scene_id: String,
    cloud: String,
    labels: String,
    objects: Vec<String>,
    corr: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Manifest {
    intrinsics: String,
    ground_truth: String,
    scenes: Vec<SceneEntry>,
}

fn parse_corr_spec(text: &str) -> Result<(f64, f64, ConfidenceModel), Error> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "--corr expects inlier_ratio,noise,model, got '{text}'"
        )));
    }
    let inlier_ratio: f64 = parts[0]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad inlier ratio '{}'", parts[0])))?;
    let noise: f64 = parts[1]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad noise '{}'", parts[1])))?;
    let model = if parts[2] == "oracle" {
        ConfidenceModel::Oracle
    } else if let Some(overlap) = parts[2].strip_prefix("noisy:") {
        ConfidenceModel::Noisy {
            overlap: overlap
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad overlap '{overlap}'")))?,
        }
    } else {
        return Err(Error::InvalidInput(format!(
            "model must be 'oracle' or 'noisy:<overlap>', got '{}'",
            parts[2]
        )));
    };
    Ok((inlier_ratio, noise, model))
}

fn cmd_synth(args: SynthArgs) -> Result<(), Error> {
    let corr_spec = args.corr.as_deref().map(parse_corr_spec).transpose()?;

    // Mesh ids are the file stems, in sorted order.
    let dir_name = args.objects.display().to_string();
    let mut mesh_files: Vec<(String, PathBuf)> = std::fs::read_dir(&args.objects)
        .map_err(|e| Error::io(&dir_name, e))?
        .filter_map(|entry| entry.ok())
        .filter_map(|entry| {
            let path = entry.path();
            let ext = path.extension()?.to_str()?.to_ascii_lowercase();
            if ext == "ply" || ext == "obj" {
                Some((path.file_stem()?.to_str()?.to_string(), path))
            } else {
                None
            }
        })
        .collect();
    mesh_files.sort();
    if args.n_scenes > 0 && mesh_files.is_empty() {
        return Err(Error::UnknownObject(format!(
            "no .ply/.obj meshes in {dir_name}"
        )));
    }
    let mut meshes: BTreeMap<String, TriangleMesh> = BTreeMap::new();
    for (id, path) in &mesh_files {
        meshes.insert(id.clone(), io::load_mesh(path)?);
    }

    std::fs::create_dir_all(&args.out)
        .map_err(|e| Error::io(args.out.display().to_string(), e))?;
    let cam = CameraIntrinsics::new(525.0, 525.0, 319.5, 239.5, 640, 480)?;

    struct SceneOutput {
        entry: SceneEntry,
        gt: Vec<io::GroundTruthRecord>,
        cloud: ColoredPointCloud,
        labels: Vec<u32>,
        corr_files: Vec<(String, posekit::CorrespondenceSet)>,
    }

    let ids: Vec<String> = meshes.keys().cloned().collect();
    let scene_results: Vec<Result<SceneOutput, Error>> = (0..args.n_scenes)
        .into_par_iter()
        .map(|scene_index| {
            let scene_id = format!("scene_{scene_index:04}");
            let scene_seed = args.seed.wrapping_add(scene_index as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(scene_seed);

            // Objects sit on a fixed lateral grid so nothing is fully
            // occluded; rotation and jitter stay random.
            let spread = 0.24;
            let placements: Vec<Placement> = ids
                .iter()
                .enumerate()
                .map(|(k, id)| {
                    let rotation =
                        posekit::geometry::random_rotation_with(RotationMode::AnyAxis, &mut rng);
                    let x = if ids.len() == 1 {
                        0.0
                    } else {
                        -spread / 2.0 + spread * k as f64 / (ids.len() - 1) as f64
                    };
                    let translation = nalgebra::Vector3::new(
                        x + rng.random_range(-0.01..0.01),
                        rng.random_range(-0.03..0.03),
                        rng.random_range(0.55..0.7),
                    );
                    Placement {
                        object_id: id.clone(),
                        pose: RigidTransform::new(*rotation.rotation(), translation)
                            .expect("rotation stays orthonormal"),
                    }
                })
                .collect();

            let spec = SceneSpec {
                placements,
                cam,
                depth_noise_sigma: args.noise,
                seed: scene_seed,
            };
            let rendered = render_scene(&spec, &meshes)?;

            let mut corr_files = Vec::new();
            if let Some((inlier_ratio, noise, model)) = corr_spec {
                for (instance, (object_id, pose)) in rendered.gt.iter().enumerate() {
                    let indices: Vec<usize> = rendered
                        .instance_labels
                        .iter()
                        .enumerate()
                        .filter(|(_, &label)| label == instance as u32)
                        .map(|(i, _)| i)
                        .collect();
                    if indices.len() < 3 {
                        continue;
                    }
                    // The visible surface mapped back to the object frame
                    // stands in for the object cloud.
                    let visible_scene = rendered.cloud.select(&indices);
                    let object_cloud =
                        posekit::apply_transform(&pose.inverse(), &visible_scene);
                    let all: Vec<usize> = (0..object_cloud.len()).collect();
                    let corr = synth_correspondences(
                        &object_cloud,
                        pose,
                        &all,
                        &CorrSpec {
                            n_pairs: args.corr_pairs,
                            inlier_ratio,
                            noise_sigma: noise,
                            confidence_model: model,
                            seed: scene_seed.wrapping_add(instance as u64 + 1),
                        },
                    )?;
                    corr_files.push((object_id.clone(), corr));
                }
            }

            let gt = rendered
                .gt
                .iter()
                .map(|(object_id, pose)| {
                    io::GroundTruthRecord::from_pose(&scene_id, object_id, pose)
                })
                .collect();
            let entry = SceneEntry {
                scene_id: scene_id.clone(),
                cloud: format!("{scene_id}.ply"),
                labels: format!("{scene_id}_labels.bin"),
                objects: ids.clone(),
                corr: corr_files
                    .iter()
                    .map(|(object_id, _)| {
                        (
                            object_id.clone(),
                            format!("{scene_id}__{object_id}.corr"),
                        )
                    })
                    .collect(),
            };
            Ok(SceneOutput {
                entry,
                gt,
                cloud: rendered.cloud,
                labels: rendered.instance_labels,
                corr_files,
            })
        })
        .collect();

    let mut manifest = Manifest {
        intrinsics: "intrinsics.json".into(),
        ground_truth: "gt.jsonl".into(),
        scenes: Vec::with_capacity(args.n_scenes),
    };
    let mut gt_records = Vec::new();
    for result in scene_results {
        let output = result?;
        io::save_cloud(args.out.join(&output.entry.cloud), &output.cloud)?;
        io::save_labels(args.out.join(&output.entry.labels), &output.labels)?;
        for (object_id, corr) in &output.corr_files {
            let name = &output.entry.corr[object_id];
            io::save_correspondences(args.out.join(name), corr)?;
        }
        gt_records.extend(output.gt);
        manifest.scenes.push(output.entry);
    }
    io::save_intrinsics(args.out.join("intrinsics.json"), &cam)?;
    io::save_ground_truth(args.out.join("gt.jsonl"), &gt_records)?;
    let manifest_text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    std::fs::write(args.out.join("manifest.json"), manifest_text + "\n")
        .map_err(|e| Error::io(args.out.join("manifest.json").display().to_string(), e))?;
    println!(
        "wrote {} scenes to {}",
        manifest.scenes.len(),
        args.out.display()
    );
    Ok(())
}
