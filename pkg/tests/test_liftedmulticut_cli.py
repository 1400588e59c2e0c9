import pytest
from liftedmulticut import cli, formats, graph

SAMPLE_INSTANCE = "LMP 1\nNODES 3\nEDGE 0 1 3.0\nEDGE 1 2 -1.0\n"
SAMPLE_TRIANGLE = "LMP 1\nNODES 3\nEDGE 0 1 1.0\nEDGE 0 2 1.0\nEDGE 1 2 1.0\n"


@pytest.fixture
def instance_file(tmp_path):
    path = tmp_path / "instance.lmp"
    path.write_text(SAMPLE_INSTANCE)
    return path


@pytest.fixture
def grid_file(tmp_path):
    path = tmp_path / "grid.txt"
    rows = ["0.2 0.2 0.8 0.2 0.2"] * 4
    path.write_text("\n".join(rows) + "\n")
    return path


def run(capsys, *argv):
    code = cli.main([str(arg) for arg in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_gaec(capsys, instance_file, tmp_path):
    out_file = tmp_path / "partition.txt"
    code, out, _ = run(
        capsys, "solve", "--algo", "gaec", "--in", instance_file, "--out", out_file
    )
    assert code == 0
    assert out == "objective -1\n"
    assert formats.partition_from_file(out_file) == graph.Partition([0, 0, 1])


@pytest.mark.parametrize("algorithm", ["klj", "gaec-klj", "exact"])
def test_solve_other_algorithms(capsys, instance_file, tmp_path, algorithm):
    out_file = tmp_path / "p.txt"
    code, out, _ = run(
        capsys, "solve", "--algo", algorithm, "--in", instance_file, "--out", out_file
    )
    assert (code, out) == (0, "objective -1\n")


def test_solve_writes_trace_and_labels(capsys, instance_file, tmp_path):
    trace = tmp_path / "trace.csv"
    labels = tmp_path / "labels.txt"
    code, _, _ = run(
        capsys,
        "solve",
        "--algo",
        "gaec",
        "--in",
        instance_file,
        "--out",
        tmp_path / "p.txt",
        "--trace",
        trace,
        "--emit-labels",
        labels,
    )
    assert code == 0
    assert trace.read_text() == "step,kind,delta\n0,join,-3.0\n"
    assert labels.read_text() == "0\n1\n"


def test_solve_klj_with_init(capsys, tmp_path):
    instance = tmp_path / "instance.lmp"
    instance.write_text("LMP 1\nNODES 3\nEDGE 0 1 -1.0\nEDGE 1 2 2.0\n")
    init = tmp_path / "init.txt"
    init.write_text("0 0\n1 0\n2 1\n")
    out_file = tmp_path / "p.txt"
    code, out, _ = run(
        capsys,
        "solve",
        "--algo",
        "klj",
        "--in",
        instance,
        "--init",
        init,
        "--out",
        out_file,
    )
    assert (code, out) == (0, "objective -1\n")
    assert formats.partition_from_file(out_file) == graph.Partition([0, 1, 1])


def test_solve_init_only_for_klj(capsys, instance_file, tmp_path):
    init = tmp_path / "init.txt"
    init.write_text("0 0\n1 0\n2 1\n")
    code, _, err = run(
        capsys,
        "solve",
        "--algo",
        "gaec",
        "--in",
        instance_file,
        "--init",
        init,
        "--out",
        tmp_path / "p.txt",
    )
    assert code == 1
    assert "--init" in err


def test_solve_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.lmp"
    bad.write_text("LMP 1\nNODES 2\nEDGE 0 1 1.0\nLIFT 0 1 2.0\n")
    code, _, err = run(
        capsys, "solve", "--algo", "gaec", "--in", bad, "--out", tmp_path / "p.txt"
    )
    assert code == 2
    assert "line 4" in err


def test_solve_exact_node_cap(capsys, tmp_path):
    instance = tmp_path / "instance.lmp"
    code, _, _ = run(
        capsys,
        "gen-random",
        "--nodes",
        12,
        "--density",
        0.3,
        "--seed",
        1,
        "--out",
        instance,
    )
    assert code == 0
    out_file = tmp_path / "p.txt"
    code, _, err = run(
        capsys, "solve", "--algo", "exact", "--in", instance, "--out", out_file
    )
    assert code == 1
    assert "cap" in err


def test_usage_errors(capsys):
    assert run(capsys)[0] == 1
    assert run(capsys, "solve", "--algo", "gaec")[0] == 1
    code, _, _ = run(capsys, "solve", "--algo", "annealing", "--in", "x", "--out", "y")
    assert code == 1
    assert run(capsys, "frobnicate")[0] == 1


def test_help(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    assert "solve" in out


def test_check_infeasible(capsys, tmp_path):
    instance = tmp_path / "triangle.lmp"
    instance.write_text(SAMPLE_TRIANGLE)
    labels = tmp_path / "labels.txt"
    labels.write_text("1\n0\n0\n")
    code, out, _ = run(capsys, "check", "--in", instance, "--labels", labels)
    assert code == 3
    assert out == "cycle violation on edge 0 (0, 1)\n"


def test_check_feasible(capsys, tmp_path):
    instance = tmp_path / "triangle.lmp"
    instance.write_text(SAMPLE_TRIANGLE)
    labels = tmp_path / "labels.txt"
    labels.write_text("0\n1\n1\n")
    code, out, _ = run(capsys, "check", "--in", instance, "--labels", labels)
    assert (code, out) == (0, "feasible\n")


def test_check_length_mismatch(capsys, tmp_path):
    instance = tmp_path / "triangle.lmp"
    instance.write_text(SAMPLE_TRIANGLE)
    labels = tmp_path / "labels.txt"
    labels.write_text("0\n1\n")
    assert run(capsys, "check", "--in", instance, "--labels", labels)[0] == 2


def test_eval(capsys, tmp_path):
    truth = tmp_path / "truth.txt"
    truth.write_text("0 0\n1 0\n2 1\n3 1\n")
    pred = tmp_path / "pred.txt"
    pred.write_text("0 0\n1 1\n2 0\n3 1\n")
    code, out, _ = run(
        capsys, "eval", "--metric", "ri", "--pred", truth, "--truth", truth
    )
    assert (code, out) == (0, "1.0\n")
    code, out, _ = run(
        capsys, "eval", "--metric", "vi", "--pred", pred, "--truth", truth
    )
    assert (code, out) == (0, "2.0 1.0 1.0\n")


def test_eval_ground_set_mismatch(capsys, tmp_path):
    a = tmp_path / "a.txt"
    a.write_text("0 0\n1 0\n")
    b = tmp_path / "b.txt"
    b.write_text("0 0\n1 0\n2 0\n")
    assert run(capsys, "eval", "--metric", "vi", "--pred", a, "--truth", b)[0] == 1


def test_gen_grid(capsys, grid_file, tmp_path):
    out_file = tmp_path / "grid.lmp"
    code, _, _ = run(
        capsys,
        "gen-grid",
        "--width",
        5,
        "--height",
        4,
        "--probs",
        grid_file,
        "--dstar",
        2,
        "--out",
        out_file,
    )
    assert code == 0
    inst = formats.instance_from_file(out_file)
    assert inst.node_count == 20
    assert inst.graph.edge_count == 5 * 3 + 4 * 4


def test_gen_grid_wrong_size(capsys, grid_file, tmp_path):
    code, _, _ = run(
        capsys,
        "gen-grid",
        "--width",
        4,
        "--height",
        4,
        "--probs",
        grid_file,
        "--out",
        tmp_path / "x.lmp",
    )
    assert code == 1


def test_gen_random_is_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.lmp", tmp_path / "b.lmp"
    for path in (a, b):
        run(
            capsys,
            "gen-random",
            "--nodes",
            10,
            "--density",
            0.3,
            "--seed",
            5,
            "--lift-fraction",
            0.5,
            "--out",
            path,
        )
    assert a.read_text() == b.read_text()


def test_lift(capsys, tmp_path):
    pgraph = tmp_path / "mesh.pgraph"
    pgraph.write_text("PGRAPH 1\nNODES 3\nEDGE 0 1 0.2\nEDGE 1 2 0.1\n")
    out_file = tmp_path / "mesh.lmp"
    code, _, _ = run(capsys, "lift", "--in", pgraph, "--dstar", 2, "--out", out_file)
    assert code == 0
    assert formats.instance_from_file(out_file).lifted_edges == [(0, 2)]


def test_tiles(capsys, tmp_path):
    out_file = tmp_path / "tiles.txt"
    code, _, _ = run(
        capsys, "tiles", "--width", 4, "--height", 3, "--tile", 2, "--out", out_file
    )
    assert code == 0
    assert formats.partition_from_file(out_file).block_count == 4


def test_sweep(capsys, grid_file, tmp_path):
    truth = tmp_path / "truth.txt"
    truth.write_text("".join(f"{v} {int(v % 5 > 2)}\n" for v in range(20)))
    out_dir = tmp_path / "sweep"
    code, out, _ = run(
        capsys,
        "sweep",
        "--width",
        5,
        "--height",
        4,
        "--probs",
        grid_file,
        "--pstar",
        0.1,
        0.9,
        "--dstar",
        1,
        2,
        "--truth",
        truth,
        "--out-dir",
        out_dir,
        "--jobs",
        2,
    )
    assert code == 0
    lines = out.splitlines()
    assert [line.split()[:2] for line in lines] == [
        ["0.1", "1"],
        ["0.1", "2"],
        ["0.9", "1"],
        ["0.9", "2"],
    ]
    assert all(len(line.split()) == 7 for line in lines)
    assert (out_dir / "partition_p0.9_d2.txt").exists()
    assert lines[-1].split()[3] == "20"


def test_solve_rejects_non_utf8_instance(capsys, tmp_path):
    instance = tmp_path / "instance.lmp"
    instance.write_bytes(b"LMP 1\nNODES 2\nEDGE 0 1 1.0 # \xff\xfe\n")
    code, _, err = run(
        capsys, "solve", "--algo", "gaec", "--in", instance, "--out", tmp_path / "p.txt"
    )
    assert code == 2
    assert "UTF-8" in err


def test_check_rejects_non_utf8_labels(capsys, tmp_path):
    instance = tmp_path / "triangle.lmp"
    instance.write_text(SAMPLE_TRIANGLE)
    labels = tmp_path / "labels.txt"
    labels.write_bytes(b"\xff\n")
    code, _, err = run(capsys, "check", "--in", instance, "--labels", labels)
    assert code == 2
    assert "UTF-8" in err


@pytest.mark.parametrize("jobs", ["0", "-2", "two"])
def test_jobs_must_be_positive(capsys, grid_file, tmp_path, jobs):
    code, _, err = run(
        capsys,
        "sweep",
        "--width",
        5,
        "--height",
        4,
        "--probs",
        grid_file,
        "--out-dir",
        tmp_path / "sweep",
        "--jobs",
        jobs,
    )
    assert code == 1
    assert "--jobs" in err
    assert not (tmp_path / "sweep").exists()


def test_sweep_default_distances(capsys, grid_file, tmp_path):
    code, out, _ = run(
        capsys,
        "sweep",
        "--width",
        5,
        "--height",
        4,
        "--probs",
        grid_file,
        "--out-dir",
        tmp_path / "sweep",
    )
    assert code == 0
    assert [line.split()[:2] for line in out.splitlines()] == [
        ["0.5", "5"],
        ["0.5", "10"],
        ["0.5", "20"],
    ]
