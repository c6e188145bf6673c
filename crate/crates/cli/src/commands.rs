use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use log::{info, warn};
use readset_dist::formats::{
    parse_fasta, parse_newick, parse_phylip, parse_read_file, validate_label, write_newick, write_phylip,
    write_reads_fasta,
};
use readset_dist::phylo::fowlkes_mallows_table;
use readset_dist::rng::derive_seed;
use readset_dist::simulator::reference_matrix;
use readset_dist::{
    compute_margin_t, distance_matrix, make_family, neighbor_joining, pearson, sample_reads, upgma, DistanceMatrixF64,
    EmbeddingParams, FamilyTree, InvalidSymbolPolicy, MarginGapParams, MatchConfigF64, Method, PhyloTreeF64, Preset,
    ReadSet, SequenceRecord, SimulationParams,
};

use crate::args::{
    ClusterArgs, DistArgs, EvalArgs, FamilyArgs, MatchArgs, Metric, PipelineArgs, SamplingArgs, SimulateArgs,
    ThreadArgs,
};

const READ_FILE_SUFFIX: &str = ".reads.fa";
const KNOWN_EXTENSIONS: [&str; 7] = [".reads", ".fa", ".fasta", ".fna", ".fas", ".txt", ".seq"];

fn policy(replace_n: bool) -> InvalidSymbolPolicy {
    if replace_n {
        InvalidSymbolPolicy::ReplaceNWithA
    } else {
        InvalidSymbolPolicy::Reject
    }
}

/// Writes `content` to `path` (via a temporary sibling, so a failed run never
/// leaves a truncated file) or to stdout.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".partial");
            let tmp = PathBuf::from(tmp);
            fs::write(&tmp, content).with_context(|| format!("writing {}", tmp.display()))?;
            fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
            info!("wrote {}", path.display());
        }
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes()).context("writing to stdout")?;
            out.flush().context("writing to stdout")?;
        }
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn thread_pool(args: &ThreadArgs) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        builder = builder.num_threads(n);
    }
    builder.build().context("starting worker threads")
}

pub fn load_sequences(path: &Path, replace_n: bool) -> Result<Vec<SequenceRecord>> {
    let records = parse_fasta(&read_text(path)?, policy(replace_n)).with_context(|| format!("{}", path.display()))?;
    if records.is_empty() {
        bail!("{}: no sequences found", path.display());
    }
    let mut seen = BTreeSet::new();
    for r in &records {
        validate_label(&r.identifier).with_context(|| format!("{}", path.display()))?;
        if r.identifier.contains(['/', '\\']) || r.identifier.starts_with('.') {
            bail!(
                "{}: sequence identifier {:?} cannot be used as a file name",
                path.display(),
                r.identifier
            );
        }
        if !seen.insert(r.identifier.as_str()) {
            bail!("{}: duplicate sequence identifier {:?}", path.display(), r.identifier);
        }
    }
    Ok(records)
}

fn sample_all(records: &[SequenceRecord], sampling: &SamplingArgs, seed: u64) -> Result<Vec<ReadSet>> {
    records
        .iter()
        .map(|r| {
            let params = SimulationParams {
                alpha: sampling.coverage,
                read_length: sampling.read_length,
                strand_noise: sampling.strand_noise,
                orientation_noise: sampling.orientation_noise,
                rng_seed: derive_seed(seed, &r.identifier),
            };
            sample_reads(r, &params).with_context(|| format!("sampling reads of {}", r.identifier))
        })
        .collect()
}

fn write_read_sets(sets: &[ReadSet], out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    sets.iter()
        .map(|set| {
            let path = out_dir.join(format!("{}{READ_FILE_SUFFIX}", set.label()));
            write_output(Some(&path), &write_reads_fasta(set))?;
            Ok(path)
        })
        .collect()
}

/// `simulate`: one `<id>.reads.fa` per input sequence. Returns the written paths.
pub fn simulate(args: &SimulateArgs) -> Result<Vec<PathBuf>> {
    let records = load_sequences(&args.input, args.replace_n)?;
    let sets = sample_all(&records, &args.sampling, args.seed)?;
    write_read_sets(&sets, &args.out_dir)
}

/// Read-set label from a file name: directory and known extensions stripped.
pub fn label_from_path(path: &Path) -> String {
    let mut name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    while let Some(ext) = KNOWN_EXTENSIONS
        .iter()
        .find(|ext| name.len() > ext.len() && name.to_ascii_lowercase().ends_with(*ext))
    {
        name.truncate(name.len() - ext.len());
    }
    name
}

/// Makes labels unique by appending `_2`, `_3`, ... to repeats.
fn dedupe_labels(labels: &mut [String]) {
    let mut taken: BTreeSet<String> = BTreeSet::new();
    for label in labels.iter_mut() {
        if taken.contains(label.as_str()) {
            let base = label.clone();
            let mut i = 2;
            while taken.contains(&format!("{base}_{i}")) {
                i += 1;
            }
            *label = format!("{base}_{i}");
            warn!("duplicate read-set label {base:?} renamed to {label:?}");
        }
        taken.insert(label.clone());
    }
}

/// Loads read sets; `coverage` and `read_length` replace any declared metadata.
pub fn load_read_sets(
    paths: &[PathBuf],
    coverage: Option<f64>,
    read_length: Option<usize>,
    replace_n: bool,
) -> Result<Vec<ReadSet>> {
    if let Some(c) = coverage {
        if !(c.is_finite() && c > 0.0) {
            bail!("--coverage must be positive, got {c}");
        }
    }
    if read_length == Some(0) {
        bail!("--read-length must be positive");
    }
    let mut labels: Vec<String> = paths.iter().map(|p| label_from_path(p)).collect();
    dedupe_labels(&mut labels);
    paths
        .iter()
        .zip(labels)
        .map(|(path, label)| {
            validate_label(&label).with_context(|| format!("label derived from {}", path.display()))?;
            let file = parse_read_file(&read_text(path)?, &label, policy(replace_n))
                .with_context(|| format!("{}", path.display()))?;
            if file.skipped > 0 {
                warn!("{}: skipped {} invalid reads", path.display(), file.skipped);
            }
            let mut set = file.reads;
            if set.is_empty() {
                bail!("{}: no valid reads", path.display());
            }
            if coverage.is_some() {
                set.declared_coverage = coverage;
            }
            if read_length.is_some() {
                set.declared_read_length = read_length;
            }
            Ok(set)
        })
        .collect()
}

/// Grace margin from the declared coverage and read length of the sets.
/// All sets are expected to share them; the first set decides otherwise.
fn derive_margin_t(sets: &[ReadSet]) -> Result<f64> {
    let margin_of = |set: &ReadSet| -> Result<f64> {
        let alpha = set.declared_coverage.ok_or_else(|| {
            anyhow!(
                "read set {:?} has no declared coverage; pass --coverage, a #coverage= line or --margin-t",
                set.label()
            )
        })?;
        let l = set
            .declared_read_length
            .or_else(|| set.median_read_length())
            .ok_or_else(|| anyhow!("read set {:?} has no reads", set.label()))?;
        Ok(compute_margin_t(l, alpha))
    };
    let t = margin_of(&sets[0])?;
    for set in &sets[1..] {
        let other = margin_of(set)?;
        if (other - t).abs() > 1e-12 {
            warn!(
                "read set {:?} implies margin t = {other}, using t = {t} from {:?}",
                set.label(),
                sets[0].label()
            );
        }
    }
    info!("margin t = {t}");
    Ok(t)
}

/// Match configuration: the preset first, then every explicit flag on top.
pub fn build_config(args: &MatchArgs, sets: &[ReadSet]) -> Result<MatchConfigF64> {
    if args.baseline_maxsize {
        if let Some(p) = args.preset {
            warn!("--baseline-maxsize overrides --preset {}", p.name());
        }
        return Ok(MatchConfigF64::baseline_max_cardinality());
    }
    let preset = args.preset.unwrap_or(Preset::Mes);
    if preset == Preset::Me {
        info!("preset me: matrix entries are symmetric, i.e. identical to mes");
    }
    let wants_margin = !args.no_margin && (preset.uses_margin_gaps() || args.margin_t.is_some());
    let t = match (wants_margin, args.margin_t) {
        (false, _) => None,
        (true, Some(t)) => Some(t),
        (true, None) => Some(derive_margin_t(sets)?),
    };
    let mut cfg = MatchConfigF64::preset(preset, Some(t.unwrap_or(0.0)))?;
    if preset.uses_margin_gaps() != t.is_some() {
        info!("override: margin gaps {}", if t.is_some() { "on" } else { "off" });
    }
    cfg.margin_gaps = t.map(MarginGapParams::new).transpose()?;

    if args.strand_unknown {
        cfg.strand_known = false;
    }
    if args.orientation_unknown {
        cfg.orientation_known = false;
    }
    if args.scaling || args.no_scaling {
        info!("override: scaling {}", if args.scaling { "on" } else { "off" });
        cfg.use_scaling = args.scaling;
    }
    if let Some(theta) = args.threshold {
        info!("override: threshold {theta}");
        cfg.threshold_fraction = Some(theta);
    }
    if args.no_threshold {
        info!("override: threshold off");
        cfg.threshold_fraction = None;
    }
    if args.q.is_some() || args.candidates.is_some() || args.exact_pruning {
        let mut e = cfg.embedding.unwrap_or_default();
        e.q = args.q.unwrap_or(e.q);
        e.candidates = args.candidates.unwrap_or(e.candidates);
        e.exact_pruning |= args.exact_pruning;
        info!(
            "override: embedding q = {}, candidates = {}, pruning = {}",
            e.q, e.candidates, e.exact_pruning
        );
        cfg.embedding = Some(e);
    }
    if args.no_embedding {
        info!("override: embedding off");
        cfg.embedding = None;
    }
    if let Some(c) = args.sample_coverage {
        info!("override: sampling to coverage {c}");
        cfg.sample_to_coverage = Some(c);
    }
    if args.no_sampling {
        info!("override: sampling off");
        cfg.sample_to_coverage = None;
    }
    cfg.rng_seed = args.seed;
    cfg.validate()?;
    Ok(cfg)
}

fn compute_matrix(sets: &[ReadSet], args: &MatchArgs, pool: &rayon::ThreadPool) -> Result<DistanceMatrixF64> {
    let cfg = build_config(args, sets)?;
    if cfg.embedding == Some(EmbeddingParams::default()) {
        info!("q-gram candidate filter on (q = 3, c = 5)");
    }
    pool.install(|| distance_matrix(sets, &cfg))
        .context("computing distance matrix")
}

/// `dist`: PHYLIP matrix of the selected estimator.
pub fn dist(args: &DistArgs) -> Result<String> {
    let pool = thread_pool(&args.threads)?;
    let sets = load_read_sets(&args.inputs, args.coverage, args.read_length, args.replace_n)?;
    let matrix = compute_matrix(&sets, &args.matching, &pool)?;
    let text = write_phylip(&matrix)?;
    write_output(args.output.as_deref(), &text)?;
    Ok(text)
}

pub fn build_tree(matrix: &DistanceMatrixF64, method: Method) -> Result<PhyloTreeF64> {
    let tree = match method {
        Method::Upgma => upgma(matrix)?,
        Method::NeighborJoining => neighbor_joining(matrix)?,
    };
    Ok(tree)
}

fn load_matrix(path: &Path) -> Result<DistanceMatrixF64> {
    parse_phylip(&read_text(path)?).with_context(|| format!("{}", path.display()))
}

fn load_tree(path: &Path) -> Result<PhyloTreeF64> {
    parse_newick(&read_text(path)?).with_context(|| format!("{}", path.display()))
}

/// `cluster`: Newick tree of a PHYLIP matrix.
pub fn cluster(args: &ClusterArgs) -> Result<String> {
    let matrix = load_matrix(&args.matrix)?;
    let text = write_newick(&build_tree(&matrix, args.method)?)?;
    write_output(args.output.as_deref(), &text)?;
    Ok(text)
}

/// `pearson\t<r>` line, `undefined` for a zero-variance operand.
pub fn pearson_report(first: &DistanceMatrixF64, second: &DistanceMatrixF64) -> Result<String> {
    let r = pearson(first, second)?;
    Ok(match r {
        Some(r) => format!("pearson\t{r:.6}\n"),
        None => {
            warn!("Pearson correlation undefined: one matrix has zero variance");
            "pearson\tundefined\n".to_string()
        }
    })
}

/// `k\tB_k` table for `k = 2..n-1`.
pub fn fm_report(first: &PhyloTreeF64, second: &PhyloTreeF64) -> Result<String> {
    let mut out = String::from("k\tB_k\n");
    for (k, b) in fowlkes_mallows_table(first, second)? {
        writeln!(out, "{k}\t{b:.6}").expect("writing to a String");
    }
    Ok(out)
}

/// `eval`: text report comparing two matrices or two trees.
pub fn eval(args: &EvalArgs) -> Result<String> {
    let text = match args.metric {
        Metric::Pearson => pearson_report(&load_matrix(&args.first)?, &load_matrix(&args.second)?),
        Metric::Fm => fm_report(&load_tree(&args.first)?, &load_tree(&args.second)?),
    }
    .with_context(|| format!("comparing {} with {}", args.first.display(), args.second.display()))?;
    write_output(args.output.as_deref(), &text)?;
    Ok(text)
}

/// `pipeline`: reads, estimated and reference matrices, both trees and a report.
/// Returns the report.
pub fn pipeline(args: &PipelineArgs) -> Result<String> {
    let pool = thread_pool(&args.threads)?;
    let records = load_sequences(&args.input, args.replace_n)?;
    let seed = args.matching.seed;
    let sets = sample_all(&records, &args.sampling, seed)?;
    let out = &args.out_dir;
    let read_paths = write_read_sets(&sets, &out.join("reads"))?;

    let mut matching = args.matching.clone();
    if args.sampling.strand_noise && !matching.strand_unknown {
        info!("strand noise in the simulation: matching with strand unknown");
        matching.strand_unknown = true;
    }
    if args.sampling.orientation_noise && !matching.orientation_unknown {
        info!("orientation noise in the simulation: matching with orientation unknown");
        matching.orientation_unknown = true;
    }
    let sets = load_read_sets(&read_paths, None, None, false)?;
    let estimate = compute_matrix(&sets, &matching, &pool)?;
    let reference = pool.install(|| reference_matrix(&records));
    write_output(Some(&out.join("estimate.phy")), &write_phylip(&estimate)?)?;
    write_output(Some(&out.join("reference.phy")), &write_phylip(&reference)?)?;

    let estimate_tree = build_tree(&estimate, args.method)?;
    let reference_tree = build_tree(&reference, args.method)?;
    write_output(Some(&out.join("estimate.nwk")), &write_newick(&estimate_tree)?)?;
    write_output(Some(&out.join("reference.nwk")), &write_newick(&reference_tree)?)?;

    let mut report = pearson_report(&estimate, &reference)?;
    report.push_str(&fm_report(&estimate_tree, &reference_tree)?);
    write_output(Some(&out.join("report.txt")), &report)?;
    Ok(report)
}

fn write_sequences_fasta(records: &[SequenceRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push('>');
        out.push_str(&r.identifier);
        out.push('\n');
        for chunk in r.sequence().chunks(80) {
            out.push_str(std::str::from_utf8(chunk).expect("sequences are ASCII"));
            out.push('\n');
        }
    }
    out
}

/// `family`: star-plus-chain family of related sequences.
pub fn family(args: &FamilyArgs) -> Result<String> {
    let tree = FamilyTree::star_plus_chain(&args.star_rates, &args.chain_rates);
    if tree.nodes.is_empty() {
        bail!("family needs at least one star or chain member");
    }
    let family = make_family(args.length, &tree, args.seed)?;
    let text = write_sequences_fasta(&family.sequences);
    write_output(args.output.as_deref(), &text)?;
    if let Some(path) = &args.reference {
        write_output(Some(path), &write_phylip(&family.reference)?)?;
    }
    Ok(text)
}
