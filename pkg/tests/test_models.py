import pytest

from src.models import Result
from src.orchestrator import AbortReason


class TestResult:
    def test_success(self) -> None:
        result: Result[int, AbortReason] = Result.success(3)
        assert result.is_success
        assert result.unwrap() == 3
        with pytest.raises(ValueError, match="unwrap_error"):
            result.unwrap_error()

    def test_failure(self) -> None:
        result: Result[int, AbortReason] = Result.failure(AbortReason.VERIFICATION_FAILED)
        assert not result.is_success
        assert result.unwrap_error() == AbortReason.VERIFICATION_FAILED
        with pytest.raises(ValueError, match="verification_failed"):
            result.unwrap()

    def test_map_and_chain(self) -> None:
        ok: Result[int, AbortReason] = Result.success(2)
        bad: Result[int, AbortReason] = Result.failure(AbortReason.POLICY)

        assert ok.map(lambda v: v * 10).unwrap() == 20
        assert bad.map(lambda v: v * 10).unwrap_error() == AbortReason.POLICY
        assert ok.chain(lambda v: Result.failure(AbortReason.ROUND_LIMIT)).unwrap_error() == AbortReason.ROUND_LIMIT
        assert bad.chain(lambda v: Result.success(v)).unwrap_error() == AbortReason.POLICY

    def test_map_error(self) -> None:
        bad: Result[int, AbortReason] = Result.failure(AbortReason.POLICY)
        assert bad.map_error(str).unwrap_error() == "policy"
        assert Result.success(1).map_error(str).unwrap() == 1

    def test_none_is_a_valid_success_payload(self) -> None:
        result: Result[None, AbortReason] = Result.success(None)
        assert not result.is_failure
        assert result.unwrap() is None
        assert Result.failure(AbortReason.ROUND_LIMIT).is_failure
