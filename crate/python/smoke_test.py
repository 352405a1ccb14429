import math

import properscore as ps


def close(a, b, tol=1e-9):
    assert abs(a - b) <= tol * max(1.0, abs(b)), (a, b)


def main():
    close(ps.crps("norm", 0.0, mean=0.0, sd=1.0), (math.sqrt(2) - 1) / math.sqrt(math.pi))
    close(ps.logs("norm", 0.0), 0.5 * math.log(2 * math.pi))
    close(ps.crps("exp", 0.0, rate=1.0), 0.5)

    f = ps.Family("logis", location=1.0, scale=2.0)
    assert f.name == "logis"
    assert dict(f.params) == {"location": 1.0, "scale": 2.0}
    close(f.crps(1.0), 2.0 * (2 * math.log(2) - 1))
    g = ps.Family("norm", mean=0.0, sd=1.0).gradcrps(0.0)
    assert len(g) == 2 and abs(g[0]) < 1e-12

    close(ps.crps_mixnorm(0.3, [0.0], [1.0]), ps.crps("norm", 0.3))

    close(ps.crps_sample(1.0, [0.0, 2.0]), 0.5)
    s = ps.SampleForecast([0.0, 2.0, 1.0], weights=[1.0, 1.0, 1.0])
    assert len(s) == 3
    close(s.crps(0.5), ps.crps_sample(0.5, [0.0, 2.0, 1.0]), 1e-12)
    close(ps.crps_sample(0.0, [0.4], method="kde", bw=1.0), ps.crps("norm", 0.0, mean=0.4, sd=1.0))
    assert math.isfinite(s.logs(0.5))

    assert ps.es_sample([1.0, 2.0], [[1.0, 2.0]]) == 0.0
    assert ps.vs_sample([0.0, 1.0], [[0.0, 3.0]], p=1.0) == 8.0
    mv = ps.MultivariateForecast([[0.0, 0.0], [1.0, -2.0]])
    assert mv.dim == 2 and len(mv) == 2

    data = [0.3, -1.2, 2.5, 0.9, 1.1, -0.4]
    r = ps.minimize_score("norm", data, score="logs")
    n = len(data)
    m = sum(data) / n
    sd = math.sqrt(sum((y - m) ** 2 for y in data) / n)
    p = dict(r.params)
    assert r.converged
    close(p["mean"], m, 1e-6)
    close(p["sd"], sd, 1e-6)
    r = ps.minimize_score("t", data, fix={"df": 5.0})
    assert dict(r.params)["df"] == 5.0

    for bad in (lambda: ps.crps("norm", 0.0, sd=-1.0), lambda: ps.Family("norm", sd=0.0)):
        try:
            bad()
        except ps.DomainError:
            pass
        else:
            raise AssertionError("expected DomainError")
    try:
        ps.crps("nope", 0.0)
    except ps.ScoreError:
        pass
    else:
        raise AssertionError("expected ScoreError")
    try:
        ps.crps("norm", 0.0, sdd=2.0)
    except ps.ScoreError:
        pass
    else:
        raise AssertionError("expected ScoreError for unknown parameter")

    assert "mixnorm" in ps.FAMILIES
    print("smoke test ok")


if __name__ == "__main__":
    main()
