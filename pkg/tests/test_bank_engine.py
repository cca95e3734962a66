"""Bank-side ledger simulation and break-even solving."""

import dataclasses
import random

import pytest

from venturebank.bank_engine import (
    ScenarioConfig,
    bank_summary,
    break_even_rate,
    simulate_bank,
    write_bank_csv,
)
from venturebank.din import DinTerms, PremiumBase, underwriter_ledger
from venturebank.portfolio import ReturnPortfolio


def _random_scenario(rng: random.Random) -> ScenarioConfig:
    n = rng.randint(1, 12)
    funds = tuple(round(rng.uniform(0.0, 4.0), 3) for _ in range(n))
    payoff = rng.randint(1, 10)
    terms = DinTerms(
        coverage_fraction=round(rng.uniform(0.03, 0.20), 4),
        coverage_floor=0.0288,
        premium_rate=round(rng.uniform(0.0, 0.08), 4),
        premium_base=rng.choice(list(PremiumBase)),
        payoff_year=payoff,
        term_years=10,
    )
    return ScenarioConfig(
        portfolio=ReturnPortfolio(funds, f"rand-{n}"),
        din_terms=terms,
        bank_rate=round(rng.uniform(0.0, 0.08), 4),
        moc=rng.choice([5.0, 30.0, 43.0]),
        original_capital=rng.choice([1.0, 2.5]),
        surplus_rate=rng.choice([0.0, 0.01]),
    )


class TestOracles:
    def test_single_winner_zero_rate(self):
        # By hand: 0.5 gain less ten 5% premiums on a 3.88% face,
        # levered 30x: 1 + 30 * (0.5 - 0.0194) = 15.418.
        cfg = ScenarioConfig(ReturnPortfolio((1.5,)), DinTerms(), bank_rate=0.0, moc=30)
        result = simulate_bank(cfg)
        assert result.final_multiple == pytest.approx(15.418, abs=1e-9)
        assert result.survived

    def test_everything_nets_to_break_even(self):
        terms = DinTerms(coverage_fraction=0.0288, premium_rate=0.0)
        cfg = ScenarioConfig(ReturnPortfolio((1.0, 1.0, 1.0)), terms, 0.0, 30)
        result = simulate_bank(cfg)
        assert result.final_multiple == 1.0
        assert result.survived

    def test_survival_flag_tracks_break_even(self, anchor131, calibrated_terms):
        low = simulate_bank(ScenarioConfig(anchor131, calibrated_terms, 0.001, 30))
        high = simulate_bank(ScenarioConfig(anchor131, calibrated_terms, 0.075, 30))
        assert low.survived and low.final_multiple >= 1.0
        assert not high.survived and high.final_multiple < 1.0


class TestConfigValidation:
    def test_bad_values_rejected(self, anchor131):
        with pytest.raises(ValueError):
            ScenarioConfig(anchor131, DinTerms(), bank_rate=-0.01, moc=30)
        with pytest.raises(ValueError):
            ScenarioConfig(anchor131, DinTerms(), bank_rate=0.02, moc=0)
        with pytest.raises(ValueError):
            ScenarioConfig(anchor131, DinTerms(), 0.02, 30, horizon_years=7)


class TestLedgerShape:
    def test_year_rows_and_balances(self, anchor131, calibrated_terms):
        result = simulate_bank(ScenarioConfig(anchor131, calibrated_terms, 0.0225, 30))
        assert len(result.ledger) == 11
        assert [r.year for r in result.ledger] == list(range(11))
        assert all(r.debt_balance_end >= 0 for r in result.ledger)
        assert all(r.cash_balance_end >= 0 for r in result.ledger)

    def test_csv_and_summary(self, tmp_path, anchor131, calibrated_terms):
        result = simulate_bank(ScenarioConfig(anchor131, calibrated_terms, 0.0225, 30))
        out = tmp_path / "bank.csv"
        write_bank_csv(out, result)
        lines = out.read_text().splitlines()
        assert lines[0] == "year,interest,premiums,din_receipts,exit_proceeds,debt,equity"
        assert len(lines) == 12
        assert "final_multiple=" in bank_summary(result)


class TestConservation:
    def test_equity_change_equals_flows(self):
        rng = random.Random(91)
        for _ in range(8):
            cfg = _random_scenario(rng)
            result = simulate_bank(cfg)
            for prev, cur in zip(result.ledger, result.ledger[1:]):
                flow = (-cur.interest_accrued + cur.surplus_interest - cur.premiums_paid
                        + cur.din_receipts + cur.exit_proceeds)
                assert cur.equity_estimate - prev.equity_estimate == pytest.approx(flow, abs=1e-9)


class TestScalingProperties:
    def test_leverage_affinity(self):
        rng = random.Random(17)
        for _ in range(20):
            cfg = _random_scenario(rng)
            m30 = simulate_bank(dataclasses.replace(cfg, moc=30.0)).final_multiple
            m43 = simulate_bank(dataclasses.replace(cfg, moc=43.0)).final_multiple
            assert (m43 - 1) / 43 == pytest.approx((m30 - 1) / 30, abs=1e-9)

    def test_capital_scaling(self, anchor131, calibrated_terms):
        base = simulate_bank(ScenarioConfig(anchor131, calibrated_terms, 0.0225, 30,
                                            original_capital=1.0))
        scaled = simulate_bank(ScenarioConfig(anchor131, calibrated_terms, 0.0225, 30,
                                              original_capital=3.0))
        assert scaled.final_multiple == pytest.approx(base.final_multiple, abs=1e-9)
        for a, b in zip(base.ledger, scaled.ledger):
            assert b.debt_balance_end == pytest.approx(3 * a.debt_balance_end, rel=1e-12, abs=1e-9)
            assert b.premiums_paid == pytest.approx(3 * a.premiums_paid, rel=1e-12, abs=1e-9)


class TestMonotonicity:
    def test_non_increasing_in_rate(self, anchor131, calibrated_terms):
        rates = [0.0, 0.005, 0.0225, 0.04, 0.075]
        multiples = [
            simulate_bank(ScenarioConfig(anchor131, calibrated_terms, r, 30)).final_multiple
            for r in rates
        ]
        assert all(b <= a + 1e-12 for a, b in zip(multiples, multiples[1:]))

    def test_non_increasing_in_premium_rate(self, anchor131):
        multiples = []
        for pr in (0.0, 0.02, 0.05, 0.08):
            terms = DinTerms(coverage_fraction=0.056, premium_rate=pr)
            multiples.append(
                simulate_bank(ScenarioConfig(anchor131, terms, 0.02, 30)).final_multiple
            )
        assert all(b <= a + 1e-12 for a, b in zip(multiples, multiples[1:]))

    def test_non_decreasing_in_target_mean(self, compressed50, calibrated_terms):
        from venturebank.portfolio import shift_to_mean

        for rate in (0.005, 0.0225, 0.05):
            multiples = [
                simulate_bank(ScenarioConfig(shift_to_mean(compressed50, t),
                                             calibrated_terms, rate, 30)).final_multiple
                for t in (1.10, 1.31, 1.50)
            ]
            assert all(b >= a - 1e-12 for a, b in zip(multiples, multiples[1:]))


class TestMirror:
    def test_bank_and_underwriter_streams_match_entry_for_entry(self):
        rng = random.Random(2024)
        for _ in range(10):
            cfg = _random_scenario(rng)
            principal = cfg.moc * cfg.original_capital / len(cfg.portfolio.funds)
            bank = simulate_bank(cfg)
            under = underwriter_ledger(cfg.portfolio, cfg.din_terms, cfg.bank_rate, principal)
            for brow, urow in zip(bank.ledger, under.yearly):
                assert brow.premiums_paid == urow.premium_income
                assert brow.din_receipts == urow.payouts


class TestBreakEven:
    def test_reference_portfolio_brackets(self, anchor131, portfolio150, calibrated_terms):
        cfg = ScenarioConfig(anchor131, calibrated_terms, 0.02, 30)
        rate = break_even_rate(cfg, 0.005, 0.075)
        assert rate is not None and 0.015 <= rate <= 0.030

        cfg = ScenarioConfig(portfolio150, calibrated_terms, 0.02, 30)
        rate = break_even_rate(cfg, 0.005, 0.075)
        assert rate is not None and 0.025 <= rate <= 0.040

    def test_independent_of_leverage(self, anchor131, calibrated_terms):
        r30 = break_even_rate(ScenarioConfig(anchor131, calibrated_terms, 0.02, 30), 0.005, 0.075)
        r43 = break_even_rate(ScenarioConfig(anchor131, calibrated_terms, 0.02, 43), 0.005, 0.075)
        assert r30 == pytest.approx(r43, abs=5e-6)

    def test_no_crossing_returns_none(self):
        cfg = ScenarioConfig(ReturnPortfolio((1.0,) * 10), DinTerms(), 0.02, 30)
        assert break_even_rate(cfg, 0.005, 0.075) is None

    def test_bad_bracket_rejected(self, anchor131, calibrated_terms):
        cfg = ScenarioConfig(anchor131, calibrated_terms, 0.02, 30)
        with pytest.raises(ValueError):
            break_even_rate(cfg, 0.05, 0.01)

    def test_solution_is_a_root(self, anchor131, calibrated_terms):
        # Tolerance is on the rate (1e-6); the multiple moves ~4e2 per
        # unit of rate at 30x leverage, so allow that much slack here.
        cfg = ScenarioConfig(anchor131, calibrated_terms, 0.02, 30)
        rate = break_even_rate(cfg, 0.005, 0.075)
        multiple = simulate_bank(dataclasses.replace(cfg, bank_rate=rate)).final_multiple
        assert multiple == pytest.approx(1.0, abs=1e-3)
        assert simulate_bank(dataclasses.replace(cfg, bank_rate=rate - 2e-6)).final_multiple >= multiple
        assert simulate_bank(dataclasses.replace(cfg, bank_rate=rate + 2e-6)).final_multiple <= multiple
