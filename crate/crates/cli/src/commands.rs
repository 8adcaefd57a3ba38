use std::io;
use std::path::Path;

use itdendro::partition::Assignment;
use itdendro::prelude::*;
use itdendro::svg::{compose_row, render_dendrogram_svg, render_scatter_svg};

use crate::output::{create, representatives, write_assignment_csv, write_text};
use crate::{BaselineArgs, BuildArgs, CutArgs, Format, InputArgs, KernelArg, MetricArg, RenderArgs, SuggestArgs};

fn load(a: &InputArgs) -> Result<(Dataset, Metric)> {
    let data = match a.format {
        Format::Real => {
            let opts = RealCsvOptions { has_header: a.header, label_column: a.label_column };
            load_real_csv(&a.input, &opts)?
        }
        Format::Categorical => load_categorical(&a.input, a.label_column.unwrap_or(0))?,
    };
    let metric = match a.metric {
        Some(MetricArg::Euclidean) => Metric::Euclidean,
        Some(MetricArg::Hamming) => Metric::Hamming,
        None => Metric::default_for(data.kind()),
    };
    Ok((data, metric))
}

fn kernel(a: &InputArgs) -> Kernel {
    match a.kernel {
        KernelArg::Gaussian => Kernel::Gaussian,
        KernelArg::Exponential => Kernel::Exponential,
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::Usage(format!("--sigma must be positive, got {sigma}")))
    }
}

struct Built {
    potentials: Potentials,
    it: ITStructure,
    merges: MergeTable,
}

fn run_pipeline(view: &DissimilarityView<'_>, a: &InputArgs) -> Result<Built> {
    let potentials = compute_potentials_with(view, a.sigma, kernel(a))?;
    let it = build_it(view, &potentials)?;
    let merges = merge_table_fast(&it);
    Ok(Built { potentials, it, merges })
}

pub fn build(a: &BuildArgs) -> Result<()> {
    check_sigma(a.input.sigma)?;
    let (data, metric) = load(&a.input)?;
    let view = dissimilarity(&data, metric, StorageMode::OnDemand)?;
    let b = run_pipeline(&view, &a.input)?;
    let bundle = DendroBundle::new(&data, metric, &b.potentials, &b.it, &b.merges);
    write_text(&a.out, &bundle.to_json()?)?;
    if let Some(svg) = &a.svg {
        write_text(svg, &render_dendrogram_svg(&b.merges, None, None))?;
    }
    println!("n: {}", data.len());
    println!("d: {}", data.dim());
    println!("root: {}", b.it.root());
    println!("bundle: {}", a.out.display());
    Ok(())
}

fn print_eval(labels: Option<&[String]>, cluster_of: &[usize], prefix: &str) -> Result<()> {
    let labels = labels.ok_or_else(|| Error::Usage("--eval needs annotations, but there are none".into()))?;
    let e = evaluate(cluster_of, labels)?;
    println!("{prefix}error_count: {}", e.error_count);
    println!("{prefix}purity: {}", e.purity);
    Ok(())
}

pub fn cut(a: &CutArgs) -> Result<()> {
    let bundle = DendroBundle::read(&a.bundle)?;
    let it = bundle.it_structure()?;
    let assignment = match (a.threshold, a.top_k) {
        (Some(tau), _) => cut_threshold(&it, tau)?,
        (None, Some(k)) => cut_top_k(&it, k)?,
        (None, None) => unreachable!("clap requires one rule"),
    };
    match &a.out {
        Some(path) => write_assignment(path, &assignment)?,
        None => write_assignment_csv(io::stdout().lock(), &assignment.cluster_of, &assignment.roots)?,
    }
    // metrics go to stderr when the CSV itself is on stdout
    let report = |line: String| {
        if a.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    };
    report(format!("clusters: {}", assignment.cluster_count()));
    if a.eval {
        let labels = bundle
            .labels
            .as_deref()
            .ok_or_else(|| Error::Usage("--eval needs annotations, but the bundle has none".into()))?;
        let e = assignment.evaluate(labels)?;
        report(format!("error_count: {}", e.error_count));
        report(format!("purity: {}", e.purity));
    }
    if let Some(svg) = &a.svg {
        let z = bundle.merge_table()?;
        write_text(svg, &render_dendrogram_svg(&z, a.threshold, Some(&assignment.cluster_of)))?;
    }
    Ok(())
}

fn write_assignment(path: &Path, a: &Assignment) -> Result<()> {
    write_assignment_csv(create(path)?, &a.cluster_of, &a.roots)?;
    Ok(())
}

pub fn suggest(a: &SuggestArgs) -> Result<()> {
    let bundle = DendroBundle::read(&a.bundle)?;
    let z = bundle.merge_table()?;
    println!("tau,gap");
    for s in suggest_thresholds(&z, a.max) {
        println!("{},{}", s.tau, s.gap);
    }
    Ok(())
}

/// Threshold from the widest gap, or the top height when there is no gap.
fn default_threshold(z: &MergeTable) -> f64 {
    suggest_thresholds(z, 1).first().map(|s| s.tau).unwrap_or_else(|| z.heights().last().copied().unwrap_or(0.0))
}

pub fn baseline(a: &BaselineArgs) -> Result<()> {
    check_sigma(a.input.sigma)?;
    if let Some(t) = a.threshold {
        if t.is_nan() || t < 0.0 {
            return Err(Error::Usage(format!("--threshold must be non-negative, got {t}")));
        }
    }
    let (data, metric) = load(&a.input)?;
    if data.len() > a.cap {
        return Err(Error::Usage(format!(
            "N = {} exceeds the single-link cap of {}; raise it with --cap",
            data.len(),
            a.cap
        )));
    }
    if data.len() == 1 {
        println!("n: 1, nothing to compare");
        return Ok(());
    }
    let view = dissimilarity(&data, metric, StorageMode::Materialized)?;
    let b = run_pipeline(&view, &a.input)?;
    let single = slhc(&view)?;

    let it_tau = a.threshold.unwrap_or_else(|| default_threshold(&b.merges));
    let sl_tau = a.threshold.unwrap_or_else(|| default_threshold(&single));
    let it_cut = cut_threshold(&b.it, it_tau)?;
    let sl_clusters = single.partition_at(sl_tau);
    let sl_roots = representatives(&sl_clusters);

    write_assignment(&a.out.join("it_assignment.csv"), &it_cut)?;
    write_assignment_csv(create(&a.out.join("slhc_assignment.csv"))?, &sl_clusters, &sl_roots)?;

    let mut panels =
        vec![("in-tree dendrogram", render_dendrogram_svg(&b.merges, Some(it_tau), Some(&it_cut.cluster_of)))];
    let coords = data.coords2d();
    if let Some(c) = &coords {
        panels.push(("in-tree clusters", render_scatter_svg(c, Some(&it_cut.cluster_of))));
    }
    panels.push(("single-link dendrogram", render_dendrogram_svg(&single, Some(sl_tau), Some(&sl_clusters))));
    if let Some(c) = &coords {
        panels.push(("single-link clusters", render_scatter_svg(c, Some(&sl_clusters))));
    }
    write_text(&a.out.join("comparison.svg"), &compose_row(&panels))?;

    println!("n: {}", data.len());
    println!("it_threshold: {it_tau}");
    println!("it_clusters: {}", it_cut.cluster_count());
    if a.eval {
        print_eval(data.labels(), &it_cut.cluster_of, "it_")?;
    }
    println!("slhc_threshold: {sl_tau}");
    println!("slhc_clusters: {}", sl_roots.len());
    if a.eval {
        print_eval(data.labels(), &sl_clusters, "slhc_")?;
    }
    Ok(())
}

pub fn render(a: &RenderArgs) -> Result<()> {
    let bundle = DendroBundle::read(&a.bundle)?;
    let z = bundle.merge_table()?;
    let coloring = match a.threshold {
        Some(tau) => Some(cut_threshold(&bundle.it_structure()?, tau)?.cluster_of),
        None => None,
    };
    write_text(&a.svg, &render_dendrogram_svg(&z, a.threshold, coloring.as_deref()))?;
    if let Some(path) = &a.scatter {
        let coords = bundle
            .coords2d
            .as_deref()
            .ok_or_else(|| Error::Usage("bundle has no planar coordinates to scatter".into()))?;
        write_text(path, &render_scatter_svg(coords, coloring.as_deref()))?;
    }
    Ok(())
}
