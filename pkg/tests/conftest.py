import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qaoa_qfi.graphs import complete_graph, cyclic_graph  # noqa: E402
from qaoa_qfi.simulator import AnsatzSpec  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def all_specs(n, topologies=("cyclic", "complete"), depths=(1, 2, 3)):
    """Every (topology, mixer, ent pattern, depth) with stages = depth when entangled."""
    out = []
    for topo in topologies:
        g = cyclic_graph(n) if topo == "cyclic" else complete_graph(n)
        for mixer in ("rx", "rxry"):
            for pattern in ("none", "cyclic", "complete"):
                for depth in depths:
                    out.append(AnsatzSpec(g, depth, mixer, pattern, 0 if pattern == "none" else depth))
    return out


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
