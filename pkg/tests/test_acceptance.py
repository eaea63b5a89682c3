"""AC-1..AC-13 at their stated tolerances and time limits.

Each criterion prints one ``AC-k: PASS/FAIL`` line, including the elapsed time
against its limit.
"""
import pytest

from pcurv.acceptance import ALL, PROFILES, run_profile
from pcurv.zoo import ConfigError


@pytest.mark.parametrize("name", list(ALL))
def test_acceptance_criterion(name, capsys):
    result = ALL[name]()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
    assert result.within_time, f"{result.seconds:.2f}s exceeds {result.limit}s"


def test_profiles():
    assert set(PROFILES["full"]) == {f"AC-{k}" for k in range(1, 14)}
    assert set(PROFILES["quick"]) <= set(PROFILES["full"])
    with pytest.raises(ConfigError):
        run_profile("nope")
