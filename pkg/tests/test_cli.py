import json

from uavhetnet.cli import main

RUN_ARGS = ["--replications", "1", "--horizon", "60", "--epoch-length", "30"]


def test_run_writes_all_outputs(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["run", "--seed", "11", "--out", str(out)] + RUN_ARGS)
    assert code == 0
    for name in ("metrics.json", "steps.csv", "assignment.json", "costs.csv",
                 "cost_trace.svg"):
        assert (out / name).exists(), name
    stdout = json.loads(capsys.readouterr().out)
    assert stdout["summary"]["mean_delay_s"]["mean"] > 0


def test_run_uavs_off_flag(tmp_path):
    out = tmp_path / "out"
    assert main(["run", "--seed", "3", "--uavs", "off", "--out", str(out)] + RUN_ARGS) == 0
    payload = json.loads((out / "metrics.json").read_text())
    assert payload["config"]["uavs_enabled"] is False
    assert payload["replications"][0]["metrics"]["cost_trace"] == []


def test_run_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    main(["run", "--seed", "21", "--out", str(a)] + RUN_ARGS)
    main(["run", "--seed", "21", "--out", str(b)] + RUN_ARGS)
    assert (a / "metrics.json").read_bytes() == (b / "metrics.json").read_bytes()
    assert (a / "steps.csv").read_bytes() == (b / "steps.csv").read_bytes()


def test_config_file_drives_run(tmp_path):
    cfg = tmp_path / "scn.json"
    cfg.write_text(json.dumps({"active_users": 70, "seed": 2}))
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg), "--out", str(out)] + RUN_ARGS) == 0
    payload = json.loads((out / "metrics.json").read_text())
    assert payload["config"]["active_users"] == 70


def test_unknown_config_key_fails_with_error_json(tmp_path, capsys):
    cfg = tmp_path / "scn.json"
    cfg.write_text(json.dumps({"frobnicate": 1}))
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")] + RUN_ARGS)
    assert code == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ValueError"
    assert "frobnicate" in err["message"]


def test_missing_config_file_fails(tmp_path, capsys):
    code = main(["run", "--config", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path / "out")] + RUN_ARGS)
    assert code == 2
    assert json.loads(capsys.readouterr().err)["error"] == "FileNotFoundError"


def test_report_reaggregates_bit_identically(tmp_path, capsys):
    out = tmp_path / "out"
    main(["run", "--seed", "31", "--out", str(out)] + RUN_ARGS)
    original = json.loads((out / "metrics.json").read_text())
    capsys.readouterr()

    rep_out = tmp_path / "rep"
    code = main(["report", "--steps", str(out / "steps.csv"), "--out", str(rep_out)])
    assert code == 0
    recomputed = json.loads((rep_out / "metrics.json").read_text())
    assert [r["metrics"] for r in recomputed["replications"]] == \
        [r["metrics"] for r in original["replications"]]


def test_compare_writes_paired_outputs(tmp_path, capsys):
    out = tmp_path / "cmp"
    code = main(["compare", "--seed", "7", "--out", str(out)] + RUN_ARGS)
    assert code == 0
    payload = json.loads((out / "compare.json").read_text())
    assert set(payload) == {"baseline", "uav", "improvement_pct"}
    assert (out / "baseline" / "steps.csv").exists()
    assert (out / "uav" / "steps.csv").exists()
    assert (out / "compare_metrics.svg").exists()
    assert payload["improvement_pct"]["mean_delay_reduction"] is not None


def test_sweep_writes_table_and_figures(tmp_path, capsys):
    out = tmp_path / "swp"
    code = main(["sweep", "--seed", "5", "--out", str(out),
                 "--horizon", "30", "--epoch-length", "30",
                 "--extra-users", "0,50", "--altitudes", "350",
                 "--alphas", "3", "--replications", "1"])
    assert code == 0
    assert (out / "sweep.csv").exists()
    for fig in ("fig4_delay_vs_extra_users.svg", "fig5_coverage_vs_pathloss.svg",
                "fig6_coverage_vs_extra_users.svg", "fig7_p5se_vs_extra_users.svg",
                "fig8_p5se_vs_pathloss.svg", "fig9_sinr_prob_vs_extra_users.svg"):
        assert (out / fig).exists(), fig
    header = (out / "sweep.csv").read_text().splitlines()[0]
    assert header.startswith("extra_users,altitude_ft,pathloss_exp,uavs_enabled")


def test_svg_outputs_are_self_contained(tmp_path, capsys):
    out = tmp_path / "out"
    main(["run", "--seed", "11", "--out", str(out)] + RUN_ARGS)
    svg = (out / "cost_trace.svg").read_text()
    assert svg.lstrip().startswith("<?xml")
    assert "<svg" in svg
    assert "href=\"http" not in svg          # no external references
