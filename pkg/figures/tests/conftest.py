import pytest

HEADER = "construction,n,method,beta,stderr,samples,seed,beta_expansion,jensen_upper"


def write_sweep(path, rows, header=HEADER):
    """Write a sweep CSV from (construction, n, method, beta, stderr,
    samples, seed, beta_expansion, jensen_upper) tuples."""
    lines = [header]
    for r in rows:
        lines.append(",".join(str(v) for v in r))
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def small_sweep(tmp_path):
    """Two constructions at n in {8, 16}, one exact row and three MC rows."""
    return write_sweep(
        tmp_path / "sweep.csv",
        [
            ("oah", 8, "exact", 1.856, 0.0, 256, "", 2.1383, 2.3548),
            ("oah", 16, "monte_carlo", 2.085, 0.002, 50000, 42, 2.3967, 2.6328),
            ("random-sign", 8, "monte_carlo", 1.662, 0.0023, 50000, 42, 2.1383, 2.3548),
            ("random-sign", 16, "monte_carlo", 2.031, 0.0021, 50000, 42, 2.3967, 2.6328),
        ],
    )
