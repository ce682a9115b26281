import numpy as np

from ldas.power_control import build_problem, scaling_bounds
from ldas.precoding import zf_precoder
from ldas.scenario import default_ldas


def random_cluster(rng, num_ues=None, num_antennas=None, config=None,
                   num_clusters=1, require_feasible=True, max_tries=50):
    """Random per-cluster instance: channel rows, ZF precoder, power problem.

    Channel magnitudes use a path-loss-like scale so the instances resemble
    production clusters. Redraws until the rate floors fit the antenna caps
    when require_feasible is set.
    """
    if config is None:
        config = default_ldas()
    for _ in range(max_tries):
        u = num_ues if num_ues is not None else int(rng.integers(1, 7))
        m = num_antennas if num_antennas is not None else int(rng.integers(u + 1, u + 9))
        amp = 10.0 ** rng.uniform(-6.0, -4.5, size=(u, 1))
        rows = amp * (rng.standard_normal((u, m)) + 1j * rng.standard_normal((u, m))) / np.sqrt(2.0)
        precoder = zf_precoder(rows, range(m))
        problem = build_problem(precoder, num_clusters, config)
        if not require_feasible:
            return rows, precoder, problem
        lb, ub = scaling_bounds(problem)
        if lb <= ub:
            return rows, precoder, problem
    raise RuntimeError("could not draw a feasible cluster")
