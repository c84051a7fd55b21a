import json
from fractions import Fraction

import pytest

from eisen.errors import DomainError
from eisen.eisenstein import EisensteinTable
from eisen.replicate import (
    CheckReport,
    check_conjecture,
    check_lemma_ineq,
    check_lemma_valsum,
    check_min_valuation,
    check_theorem_main,
    gekeler_scan,
    selftest,
)


def record_for(report, key, value):
    for record in report.records:
        if record[key] == value:
            return record
    raise AssertionError(f"no record with {key}={value}")


class TestLemmaValsum:
    def test_passes_to_256(self):
        report = check_lemma_valsum(256)
        assert report.status == "PASS"
        assert report.failed_count == 0

    def test_k6_is_the_power_of_two_case(self):
        report = check_lemma_valsum(64)
        rec = record_for(report, "k", 6)
        # (-1)^3 + C(6,2) = 14
        assert rec["valuation"] == 1
        assert rec["k_plus_2_power_of_two"]

    def test_k4_generic_case(self):
        rec = record_for(check_lemma_valsum(8), "k", 4)
        assert rec["valuation"] == 0
        assert not rec["k_plus_2_power_of_two"]

    def test_k14_congruence_step(self):
        rec = record_for(check_lemma_valsum(16), "k", 14)
        assert rec["binom_mod4"] == 3  # C(14,6) = 3003
        assert rec["valuation"] == 1

    def test_domain(self):
        with pytest.raises(DomainError):
            check_lemma_valsum(2)


class TestLemmaIneq:
    def test_passes_to_128(self):
        report = check_lemma_ineq(128)
        assert report.status == "PASS"

    def test_k14_first_quotient(self):
        # k + 2 = 16: valuation is s_2(7) - 1 = 2
        rec = record_for(check_lemma_ineq(16), "k", 14)
        assert rec["nu_first"] == 2
        assert rec["sharp_pair_checked"]

    def test_k8_second_quotient(self):
        # (k/2 - 1) / ((-1)^4 + C(8,3)) = 3/57
        rec = record_for(check_lemma_ineq(8), "k", 8)
        assert rec["nu_second"] == 0
        assert Fraction(3, 57) == Fraction(1, 19)

    def test_identities_hold_everywhere(self):
        report = check_lemma_ineq(64)
        assert all(rec["identities_ok"] for rec in report.records)

    def test_domain(self):
        with pytest.raises(DomainError):
            check_lemma_ineq(6)


class TestMinValuation:
    def test_passes_to_60(self, shared_table):
        report = check_min_valuation(60, table=shared_table.ensure(60))
        assert report.status == "PASS"
        assert record_for(report, "k", 12)["min_valuation2"] == 0
        assert record_for(report, "k", 4)["min_valuation2"] == 0

    def test_threaded_matches_sequential(self, shared_table):
        table = shared_table.ensure(60)
        seq = check_min_valuation(60, table=table, threads=1)
        par = check_min_valuation(60, table=table, threads=4)
        assert seq.records == par.records

    def test_builds_table_when_not_given(self):
        report = check_min_valuation(20)
        assert report.status == "PASS"
        assert len(report.records) == 9


class TestConjecture:
    def test_passes_to_60(self, shared_table):
        report = check_conjecture(60, table=shared_table.ensure(60))
        assert report.status == "PASS"

    def test_branches(self, shared_table):
        report = check_conjecture(20, table=shared_table.ensure(20))
        k12 = record_for(report, "k", 12)
        assert (k12["s2"], k12["branch"], k12["predicted"]) == (2, "generic", 0)
        k16 = record_for(report, "k", 16)
        assert (k16["branch"], k16["predicted"]) == ("power-of-two", 0)
        k20 = record_for(report, "k", 20)
        assert k20["predicted"] == 0 and k20["min_valuation2"] == 0


class TestTheoremMain:
    def test_first_three_levels(self, shared_table):
        report = check_theorem_main(2, table=shared_table.ensure(48))
        assert report.status == "PASS"
        ell0 = record_for(report, "ell", 0)
        assert ell0["k"] == 12 and ell0["t0_valuation"] == 7 and ell0["degree"] == 1
        ell1 = record_for(report, "ell", 1)
        assert ell1["verdict"] == "irreducible"
        assert ell1["certificate_rechecked"]
        assert ell1["gcd"] == 1

    def test_certificates_are_json_ready(self, shared_table):
        report = check_theorem_main(1, table=shared_table.ensure(24))
        doc = json.dumps(report.to_json_dict())
        assert '"criterion": "dumas"' in doc

    def test_domain(self):
        with pytest.raises(DomainError):
            check_theorem_main(-1)


class TestScan:
    def test_small_scan_all_irreducible(self, shared_table):
        report = gekeler_scan(60, table=shared_table.ensure(60))
        assert report.status == "PASS"
        assert report.notes["inconclusive_k"] == []
        assert all(rec["verdict"] == "irreducible" for rec in report.records)
        assert record_for(report, "k", 16)["degree"] == 1
        assert record_for(report, "k", 24)["criterion"] == "dumas"

    def test_degree_zero_weights_not_recorded(self, shared_table):
        report = gekeler_scan(60, table=shared_table.ensure(60))
        ks = [rec["k"] for rec in report.records]
        assert 4 not in ks and 14 not in ks
        assert ks == sorted(ks)

    def test_witness_counts_within_budget(self, shared_table):
        report = gekeler_scan(60, table=shared_table.ensure(60))
        for rec in report.records:
            assert len(rec["primes"]) <= 10

    def test_threaded_matches_sequential(self, shared_table):
        table = shared_table.ensure(40)
        assert gekeler_scan(40, table=table).records == gekeler_scan(40, table=table, threads=4).records

    def test_scan_agrees_with_theorem_certificates(self, shared_table):
        # the weights 12 * 2^l must come out of the sweep through the same
        # criterion the dedicated check certifies them with
        table = shared_table.ensure(96)
        theorem = check_theorem_main(3, table=table)
        scan = gekeler_scan(96, table=table)
        for rec in theorem.records:
            scanned = record_for(scan, "k", rec["k"])
            assert scanned["verdict"] == rec["verdict"] == "irreducible"
            assert scanned["criterion"] == "dumas"
            assert scanned["primes"] == [rec["certificate"]["prime"]]


class TestSelftest:
    def test_small_ranges_pass(self, shared_table):
        report = selftest(k_dual=40, k_qseries=24, k_phi=48, table=shared_table.ensure(48))
        assert report.status == "PASS"
        checks = {rec["check"] for rec in report.records}
        assert checks == {"dual-recurrence", "q-series", "phi-routes"}

    def test_deterministic_records(self, shared_table):
        table = shared_table.ensure(48)
        a = selftest(k_dual=24, k_qseries=16, k_phi=24, table=table)
        b = selftest(k_dual=24, k_qseries=16, k_phi=24, table=table)
        assert a.records == b.records
        assert a.to_json_dict()["status"] == b.to_json_dict()["status"]

    def test_fault_injection_detected(self):
        table = EisensteinTable().extend(48)
        table._w[20][2] += Fraction(1, 2)  # corrupt one stored coefficient
        table._scaled.pop(20, None)
        report = selftest(k_dual=40, k_qseries=24, k_phi=48, table=table)
        assert report.status == "FAIL"
        first = report.first_failure()
        assert first["k"] == 20

    def test_default_ranges_pass(self, shared_table):
        # the CI defaults: dual recurrence to 200, series to 60, routes to 480
        report = selftest(table=shared_table.ensure(480))
        assert report.status == "PASS"
        phi_ks = [rec["k"] for rec in report.records if rec["check"] == "phi-routes"]
        assert phi_ks[-1] == 480


class TestCheckReport:
    def test_fail_propagates(self):
        report = CheckReport("demo", {}, records=[{"k": 4, "passed": True}, {"k": 6, "passed": False}])
        assert report.status == "FAIL"
        assert report.failed_count == 1
        assert report.first_failure()["k"] == 6

    def test_json_shape(self):
        report = CheckReport("demo", {"k_max": 8}, records=[{"k": 4, "passed": True}])
        doc = report.to_json_dict()
        assert list(doc) == ["name", "params", "status", "passed", "failed", "notes", "wall_time_s", "records"]

    def test_csv_rows(self):
        report = CheckReport("demo", {}, records=[{"k": 4, "primes": [2, 3], "passed": True}])
        header, rows = report.csv_rows()
        assert header == ["k", "primes", "passed"]
        assert rows == [["4", "2;3", "True"]]

    def test_empty_report_passes(self):
        assert CheckReport("demo", {}).status == "PASS"
