from src.core.services.operation_result import OperationResult
from src.core.services.verification import Tally


def test_success_carries_data():
    result = OperationResult(success=True, data=Tally(cases=3))
    assert result.success
    assert result.data.cases == 3
    assert result.error is None


def test_failure_carries_error():
    result: OperationResult[Tally] = OperationResult(success=False, error="2 failed case(s)")
    assert not result.success
    assert result.data is None
    assert result.error == "2 failed case(s)"
