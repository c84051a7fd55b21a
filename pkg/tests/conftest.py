import time

import pytest

from eisen.eisenstein import EisensteinTable


class TimedTable:
    """Session-wide expansion table that remembers how long it took to build.

    ``ensure(k)`` extends lazily; acceptance tests fold ``build_seconds`` into
    the runtime budget of the criteria that rely on the shared table, so no
    budget is met by hiding setup cost in a fixture.
    """

    def __init__(self) -> None:
        self.table = EisensteinTable()
        self.build_seconds = 0.0

    def ensure(self, k_max: int) -> EisensteinTable:
        started = time.perf_counter()
        self.table.extend(k_max)
        self.build_seconds += time.perf_counter() - started
        return self.table


@pytest.fixture(scope="session")
def shared_table() -> TimedTable:
    return TimedTable()
