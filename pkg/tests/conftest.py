from fractions import Fraction

import pytest

from ihq.instances import build_projective_space, build_sphere_product, corpus, load_instance

ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.fixture(scope="session")
def instances():
    return corpus()


@pytest.fixture(scope="session")
def s2():
    return build_sphere_product([1])


@pytest.fixture(scope="session")
def s2s2():
    return build_sphere_product([1, 1])


@pytest.fixture(scope="session")
def cp2():
    return build_projective_space([0, 1, 3], 1)


@pytest.fixture(scope="session")
def cp3():
    return build_projective_space([0, 1, 2, 3], Fraction(3, 2))


def torus_ring_doc():
    return {
        "dims": {"0": 1, "1": 2, "2": 1},
        "labels": {"0": ["1"], "1": ["a", "b"], "2": ["w"]},
        "products": [{"left": [1, 0], "right": [1, 1], "value": {"2": ["1"]}}],
        "topDegree": 2,
        "integral": ["1"],
    }


def sphere_times_torus_doc():
    """S^2 x T^2 with the circle rotating the sphere; fixed set = two tori."""
    basis = [("1", 0, 0), ("a", 1, 0), ("b", 1, 1), ("w", 2, 0)]
    classes = []
    for d in range(5):
        for eps in (0, 1):
            for label, cdeg, idx in basis:
                j = d - 2 * eps - cdeg
                if j < 0 or j % 2:
                    continue
                j //= 2
                coeff = {str(cdeg): ["1" if k == idx else "0" for k in range(1 if cdeg != 1 else 2)]}
                name = " ".join(x for x in ("u" if eps else "", f"t^{j}" if j else "", label) if x)
                neg = {str(cdeg): [("-" + v if v != "0" else v) for v in coeff[str(cdeg)]]}
                classes.append({
                    "name": name,
                    "degree": d,
                    "restrictions": {
                        "N": [{"power": j + eps, "coeff": coeff}],
                        "S": [{"power": j + eps, "coeff": neg if eps else coeff}],
                    },
                })
    return {
        "name": "S2xT2",
        "dimM": 4,
        "degreeBound": 4,
        "components": [
            {"id": "N", "dim": 2, "momentValue": "1", "weights": [{"k": -1, "mult": 1}],
             "cohomology": torus_ring_doc(), "eulerClass": [{"power": 1, "coeff": {"0": ["-1"]}}]},
            {"id": "S", "dim": 2, "momentValue": "-1", "weights": [{"k": 1, "mult": 1}],
             "cohomology": torus_ring_doc(), "eulerClass": [{"power": 1, "coeff": {"0": ["1"]}}]},
        ],
        "classes": classes,
    }


def cp2_with_line_doc():
    """CP^2 with weights (0, 0, 1): a fixed line and a fixed point."""
    line = {"dims": {"0": 1, "2": 1}, "labels": {"0": ["1"], "2": ["h"]}, "products": [],
            "topDegree": 2, "integral": ["1"]}

    def at_line(parts):
        return [{"power": p, "coeff": c} for p, c in parts]

    classes = [
        {"name": "1", "degree": 0, "restrictions": {
            "L": at_line([(0, {"0": ["1"]})]), "p": [{"power": 0, "coeff": {"0": ["1"]}}]}},
        {"name": "t", "degree": 2, "restrictions": {
            "L": at_line([(1, {"0": ["1"]})]), "p": [{"power": 1, "coeff": {"0": ["1"]}}]}},
        {"name": "u", "degree": 2, "restrictions": {
            "L": at_line([(0, {"2": ["-1"]})]), "p": [{"power": 1, "coeff": {"0": ["1"]}}]}},
        {"name": "t^2", "degree": 4, "restrictions": {
            "L": at_line([(2, {"0": ["1"]})]), "p": [{"power": 2, "coeff": {"0": ["1"]}}]}},
        {"name": "u t", "degree": 4, "restrictions": {
            "L": at_line([(1, {"2": ["-1"]})]), "p": [{"power": 2, "coeff": {"0": ["1"]}}]}},
        {"name": "u^2", "degree": 4, "restrictions": {
            "L": [], "p": [{"power": 2, "coeff": {"0": ["1"]}}]}},
    ]
    return {
        "name": "CP2[0,0,1]",
        "dimM": 4,
        "degreeBound": 4,
        "components": [
            {"id": "L", "dim": 2, "momentValue": "-1/2", "weights": [{"k": 1, "mult": 1}],
             "cohomology": line,
             "eulerClass": [{"power": 1, "coeff": {"0": ["1"]}}, {"power": 0, "coeff": {"2": ["1"]}}]},
            {"id": "p", "dim": 0, "momentValue": "1/2", "weights": [{"k": -1, "mult": 2}], "cohomology": "point"},
        ],
        "classes": classes,
    }


@pytest.fixture(scope="session")
def s2t2():
    return load_instance(sphere_times_torus_doc())


@pytest.fixture(scope="session")
def cp2_line():
    return load_instance(cp2_with_line_doc())


def pytest_runtest_logreport(report):
    if "test_acceptance" in report.nodeid and "criterion_" in report.nodeid:
        if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
            name = report.nodeid.split("::")[-1]
            prev = ACCEPTANCE_RESULTS.get(name)
            if prev != "failed":
                ACCEPTANCE_RESULTS[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda n: (int(n.split("_")[2]), n)):
        verdict = "PASS" if ACCEPTANCE_RESULTS[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
