from ide.run_data import find_runs, load_run, manifest_json
from pipeline.commands import cmd_eval, cmd_schedule
from pipeline.config import parse_config
from raster.image import Image, write_png

def _views(tmp_path, n=2):
    paths = []
    for i in range(n):
        paths.append(write_png(tmp_path / f"view_{i}.png", Image.filled(16, 16, (0.2 * i, 0.5, 0.5))))
    return paths

def test_find_runs_lists_manifest_dirs(tmp_path):
    cfg = parse_config("")
    cmd_schedule(cfg, tmp_path / "b", steps=4)
    cmd_schedule(cfg, tmp_path / "a" / "inner", steps=4)
    (tmp_path / "empty").mkdir()
    assert find_runs(tmp_path) == [tmp_path / "a" / "inner", tmp_path / "b"]
    assert find_runs(tmp_path / "no_existe") == []

def test_load_run_reads_report_and_images(tmp_path):
    cfg = parse_config("")
    imgs = _views(tmp_path)
    cmd_eval(cfg, tmp_path / "run", views_a=imgs, views_b=imgs[::-1])
    run = load_run(tmp_path / "run")
    assert run.command == "eval"
    assert [r["row"] for r in run.report] == ["view_0", "view_1", "mean"]
    assert run.missing == []
    assert run.images == []
    assert {t["etapa"] for t in run.timings_table()} == {"views"}
    assert '"command": "eval"' in manifest_json(run)

def test_load_run_reports_missing_outputs(tmp_path):
    cmd_schedule(parse_config(""), tmp_path, steps=4)
    (tmp_path / "schedule.csv").unlink()
    run = load_run(tmp_path)
    assert run.missing == ["schedule.csv"]
    assert load_run(tmp_path / "otro") is None
