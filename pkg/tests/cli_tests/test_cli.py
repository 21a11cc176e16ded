import io
import json
from pathlib import Path

from src.adapters.onedim.service import DynamicsService
from src.presentation.cli import run, CommandManager

CORPUS = Path(__file__).resolve().parents[2] / "corpus"


def _run(*argv) -> tuple[int, dict]:
    stdout = io.StringIO()
    code = run([str(a) for a in argv], stdout=stdout)
    return code, json.loads(stdout.getvalue())


def _path(name: str) -> str:
    return str(CORPUS / f"{name}.srn")


def test_parse_command():
    """Test that parse echoes the canonical form"""
    code, report = _run("parse", _path("pure_death"))

    assert code == 0
    assert report["exit_code"] == 0
    assert report["payload"]["canonical"] == "S -> 0 @ 1\n"
    assert report["payload"]["valid"]
    assert report["network"]["omegas"] == [[-1]]


def test_parse_empty_file(tmp_path):
    """Test that a file without reactions is an input error"""
    path = tmp_path / "empty.srn"
    path.write_text("# nothing here\n", encoding="utf-8")

    code, report = _run("parse", path)

    assert code == 2
    assert report["error"]["type"] == "ParseError"
    assert report["network"] is None


def test_missing_file(tmp_path):
    """Test that an unreadable file is an input error"""
    code, report = _run("parse", tmp_path / "absent.srn")

    assert code == 2
    assert report["error"]["type"] == "FileNotFoundError"


def test_classify_command():
    """Test the classification payload of {S<->2S, S->3S}"""
    code, report = _run("classify", _path("two_cores"))

    assert code == 0
    assert report["payload"]["essential"] == "yes"
    assert sorted(report["payload"]["omega_o_set"]) == [[-1], [1], [2]]


def test_classify_sample_window():
    """Test that --sample-window sets the extinction sample bound"""
    code, report = _run("classify", _path("two_cores"), "--sample-window", 3)

    assert code == 0
    assert report["payload"]["sample_bounds"] == [3]


def test_classify_window_flags(monkeypatch):
    """Test that --window bounds the reachability windows while --sample-window goes to the extinction check"""
    seen = {}

    def classify(self, path, rates=None, budget=None, sample_window=None):
        seen.update(window_bound=self._settings.window_bound, sample_window=sample_window)
        return self._state.report(None, {})

    monkeypatch.setattr(CommandManager, "classify", classify)

    code, _ = _run("classify", _path("two_cores"), "--window", 40, "--sample-window", 3)

    assert code == 0
    assert seen == {"window_bound": 40, "sample_window": 3}


def test_core_command():
    """Test the minimal cores and their union"""
    code, report = _run("core", _path("two_cores"))

    assert code == 0
    assert [core["sub"] for core in report["payload"]["cores"]] == [[0, 1], [1, 2]]
    assert report["payload"]["union"] == [0, 1, 2]


def test_core_cap():
    """Test that a network above the cap is refused"""
    code, report = _run("core", _path("ecoli_idhkp_idh"), "--cap", 3)

    assert code == 2
    assert report["error"]["type"] == "CoreSearchCapError"


def test_analyze1d_with_kappa():
    """Test that a bound kappa reaches the threshold verdicts"""
    code, report = _run("analyze1d", _path("kappa_threshold"), "--kappa", "kappa=1/2")

    assert code == 0
    assert report["payload"]["params"]["beta"] == "1/2"
    assert report["payload"]["dynamics"]["explosive"]["value"] == "yes"


def test_analyze1d_undetermined_recurrence(tmp_path):
    """Test that an undecided positivity gives exit code 1"""
    path = tmp_path / "null.srn"
    path.write_text("S <-> 2S @ 1, 1\n2S -> 3S @ 1\n", encoding="utf-8")

    code, report = _run("analyze1d", path)

    assert code == 1
    assert report["payload"]["dynamics"]["recurrence"]["value"] == "recurrent-positivity-undetermined"
    assert report["warnings"]


def test_analyze1d_without_h3():
    """Test that a missing decreasing reaction skips the dynamic verdicts with a warning"""
    code, report = _run("analyze1d", _path("pure_birth"))

    assert code == 0
    assert report["payload"]["dynamics"] is None
    assert any("H3" in w for w in report["warnings"])


def test_analyze1d_hypothesis_violation():
    """Test that a direction with mixed signs is an input error"""
    code, report = _run("analyze1d", _path("conservative_line"))

    assert code == 2
    assert report["error"]["type"] == "HypothesisViolationError"
    assert report["error"]["context"]["hypothesis"] == "H4"


def test_analyze1d_inconsistency(monkeypatch):
    """Test that a violated structural implication gives exit code 3"""
    monkeypatch.setattr(DynamicsService, "consistency_check", staticmethod(lambda *args, **kwargs: ["forced"]))

    code, report = _run("analyze1d", _path("three_cycle"), "--kappa", "k1=1", "--kappa", "k2=1", "--kappa", "k3=1")

    assert code == 3
    assert report["error"]["type"] == "InconsistencyError"


def test_bad_representative():
    """Test that a representative of the wrong dimension is an input error"""
    code, report = _run("analyze1d", _path("two_cores"), "--c", "1,2")

    assert code == 2
    assert report["error"]["type"] == "WindowError"


def test_simulate_trajectory(tmp_path):
    """Test a single trajectory with its CSV export"""
    csv_path = tmp_path / "traj.csv"

    code, report = _run("simulate", _path("pure_death"), "traj", "--x0", 4, "--time", 1e9, "--csv", csv_path)

    assert code == 0
    assert report["payload"]["outcome"]["kind"] == "absorbed"
    assert report["payload"]["outcome"]["event_count"] == 4
    assert csv_path.read_text(encoding="utf-8").splitlines()[0] == "time,S"


def test_simulate_batch():
    """Test that a batch reports its outcome kinds"""
    code, report = _run("simulate", _path("pure_death"), "traj", "--x0", 3, "--time", 1e9, "--count", 5, "--seed", 7)

    assert code == 0
    assert report["payload"]["kinds"] == {"absorbed": 5, "censored": 0, "explosion_suspected": 0}


def test_simulate_qsd_without_particles():
    """Test that an empty particle cloud is an input error"""
    code, report = _run("simulate", _path("subcritical_linear"), "qsd", "--x0", 1, "--particles", 0)

    assert code == 2
    assert report["error"]["type"] == "SimulationParameterError"
    assert report["error"]["context"]["parameter"] == "particle_count"


def test_simulate_exact_tail():
    """Test the exact stationary tail of a geometric birth-death chain"""
    code, report = _run("simulate", _path("birth_death_geometric"), "tail", "--x0", 0, "--exact")

    assert code == 0
    assert report["payload"]["tail"]["model"] == "geometric"


def test_oracle_conservative_line():
    """Test the brute-force decomposition of the line through (0,7)"""
    code, report = _run("oracle", _path("conservative_line"), "--window", 7, "--c", "0,7")

    assert code == 0
    assert report["payload"]["labels"]["PIC-member"] == [[3, 4], [4, 3], [5, 2], [6, 1]]
    assert report["payload"]["k_set"] == [[3, 4], [4, 3], [6, 1]]
    # H4 fails here, so only the brute force is reported
    assert report["payload"]["geometry_mismatches"] is None


def test_oracle_trapping_state():
    """Test that the line through (6,0) has the single trapping state (5,1)"""
    code, report = _run("oracle", _path("conservative_line"), "--window", 6, "--c", "6,0")

    assert code == 0
    assert report["payload"]["labels"]["trapping"] == [[5, 1]]


def test_oracle_matches_geometry():
    """Test that the brute force and the closed-form geometry agree on {S<->2S, S->3S}"""
    code, report = _run("oracle", _path("two_cores"), "--window", 30, "--c", "0")

    assert code == 0
    assert report["payload"]["geometry_mismatches"] == []


def test_schema_command():
    """Test that the schema command prints the report schema"""
    code, schema = _run("schema")

    assert code == 0
    assert schema == CommandManager.schema()
    assert schema["properties"]["schema_version"]["const"] == "1.0"


def test_report_matches_schema():
    """Test that a report carries exactly the schema's properties"""
    schema = CommandManager.schema()

    _, report = _run("parse", _path("two_cores"))

    assert set(schema["required"]) <= set(report)
    assert set(report) <= set(schema["properties"])
    assert report["exit_code"] in schema["properties"]["exit_code"]["enum"]
