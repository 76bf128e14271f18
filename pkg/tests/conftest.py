import pytest

from hothand.shot_data import HEADER, Dataset, ShotEvent
from hothand.sequences import ShotSequence


def ev(t, made=1, player="P1", game="G1", season=2014, home=True, dist=20.0):
    return ShotEvent(season, game, player, home, float(t), bool(made), float(dist))


def seq(outcomes, player="P1", game="G1", season=2014, times=None):
    times = list(range(len(outcomes))) if times is None else times
    return ShotSequence(player, game, season, outcomes, times)


@pytest.fixture
def write_csv(tmp_path):
    def _write(lines, name="shots.csv", header=HEADER, newline="\n"):
        path = tmp_path / name
        body = [header] if header is not None else []
        path.write_bytes((newline.join(body + list(lines)) + newline).encode())
        return path

    return _write


@pytest.fixture
def small_ds():
    return Dataset.from_events(
        [
            ev(10, 1), ev(40, 0), ev(400, 1),
            ev(15, 0, player="P2"), ev(30, 1, player="P2"),
            ev(5, 1, game="G2", home=False), ev(95, 0, game="G2", home=False),
        ]
    ).sorted()


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when != "call":
                continue
            for name, value in rep.user_properties:
                if name == "criterion":
                    lines.append((value, "PASS" if rep.passed else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for (label, detail), verdict in sorted(lines, key=lambda x: x[0][0]):
            terminalreporter.write_line(f"{verdict}  {label}: {detail}")
