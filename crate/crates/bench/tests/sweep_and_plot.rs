use sadmm::data_io::{read_trace_csv, RunConfig};
use sadmm::Method;
use sadmm_bench::{emit_svg, load_sweep, render_svg, run_sweep, PlotSeries, TuneProtocol};

fn small_config() -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.set("dataset", "synthetic:120x6:2").unwrap();
    cfg.set("method", "sa-iu,rda").unwrap();
    cfg.set("seeds", "0..2").unwrap();
    cfg.set("passes", "6").unwrap();
    cfg
}

fn attr(node: roxmltree::Node, name: &str) -> f64 {
    node.attribute(name).unwrap().parse().unwrap()
}

#[test]
fn sweep_writes_one_csv_per_run_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config();
    let res = run_sweep(&cfg, dir.path(), &TuneProtocol::default()).unwrap();
    assert!(res.failures().is_empty());

    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(
        names,
        ["rda_seed0.csv", "rda_seed1.csv", "sa-iu_seed0.csv", "sa-iu_seed1.csv", "summary.csv"]
    );

    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 4);
    for name in &names[..4] {
        let trace = read_trace_csv(dir.path().join(name)).unwrap();
        assert_eq!(trace.records.first().unwrap().iter, 0);
        let last = trace.records.last().unwrap();
        assert!((last.passes - 6.0).abs() < 1e-9);
        assert!(trace.records.iter().all(|c| res.best <= c.objective));
    }

    let back = load_sweep(dir.path()).unwrap();
    assert_eq!(back.runs.len(), 4);
    assert_eq!(back.best, res.best);
    for m in [Method::SaIu, Method::Rda] {
        assert_eq!(back.median_passes_to_gap(m), res.median_passes_to_gap(m));
    }
}

#[test]
fn emitted_plot_is_valid_svg_spanning_the_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config();
    let res = run_sweep(&cfg, dir.path(), &TuneProtocol::default()).unwrap();
    let path = dir.path().join("plot.svg");
    emit_svg(&res, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();

    let frame = doc
        .descendants()
        .find(|n| n.has_tag_name("rect") && n.attribute("fill") == Some("none"))
        .unwrap();
    let (fx, fy) = (attr(frame, "x"), attr(frame, "y"));
    let (fw, fh) = (attr(frame, "width"), attr(frame, "height"));

    let lines: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("polyline")).collect();
    let labels: Vec<&str> = lines.iter().map(|n| n.attribute("data-label").unwrap()).collect();
    assert_eq!(labels, ["sa-iu", "rda"]);

    let pts: Vec<(f64, f64)> = lines
        .iter()
        .flat_map(|n| n.attribute("points").unwrap().split_whitespace())
        .map(|p| {
            let (x, y) = p.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect();
    let fold = |f: fn(f64, f64) -> f64, init: f64, sel: fn(&(f64, f64)) -> f64| pts.iter().map(sel).fold(init, f);
    let tol = 1e-2;
    assert!((fold(f64::min, f64::INFINITY, |p| p.0) - fx).abs() < tol);
    assert!((fold(f64::max, f64::NEG_INFINITY, |p| p.0) - (fx + fw)).abs() < tol);
    assert!((fold(f64::min, f64::INFINITY, |p| p.1) - fy).abs() < tol);
    assert!((fold(f64::max, f64::NEG_INFINITY, |p| p.1) - (fy + fh)).abs() < tol);
}

#[test]
fn labels_are_escaped() {
    let series = [PlotSeries {
        label: "a<b & \"c\"".into(),
        points: vec![(0.0, 1.0), (1.0, 0.0)],
    }];
    let text = render_svg(&series, "x < y").unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let line = doc.descendants().find(|n| n.has_tag_name("polyline")).unwrap();
    assert_eq!(line.attribute("data-label"), Some("a<b & \"c\""));
}
