import io
from datetime import datetime, timedelta, timezone

import pytest

from heatlab.tariff import (
    CSV_HEADER,
    MissingDataError,
    PriceDataError,
    PriceSeries,
    PriceSlot,
    Window,
    load_prices,
    parse_timestamp,
    price_at,
    prices_to_csv_text,
    summarize,
    synthetic_prices,
    window_bounds,
)

UTC = timezone.utc


def series_from_rows(rows, **kwargs):
    return load_prices([CSV_HEADER] + rows, **kwargs)


def make_series(start, prices):
    slots = tuple(
        PriceSlot(start=start + timedelta(minutes=30 * i), price=p) for i, p in enumerate(prices)
    )
    return PriceSeries(slots=slots)


class TestLoadPrices:
    def test_two_valid_rows(self):
        s = series_from_rows(["2023-01-01T00:00:00Z,10.5", "2023-01-01T00:30:00Z,11"])
        assert len(s.slots) == 2
        assert s.slots[0].price == 10.5

    def test_misaligned_timestamp_rejected(self):
        with pytest.raises(PriceDataError, match="aligned"):
            series_from_rows(["2023-01-01T00:17:00Z,10.5"])

    def test_gap_rejected(self):
        with pytest.raises(PriceDataError, match="gap"):
            series_from_rows(["2023-01-01T00:00:00Z,10", "2023-01-01T01:00:00Z,11"])

    def test_duplicate_rejected(self):
        with pytest.raises(PriceDataError, match="duplicate"):
            series_from_rows(["2023-01-01T00:00:00Z,10", "2023-01-01T00:00:00Z,11"])

    def test_malformed_row_names_line(self):
        with pytest.raises(PriceDataError, match="line 3"):
            series_from_rows(["2023-01-01T00:00:00Z,10", "not-a-timestamp,11"])

    def test_too_many_fraction_digits_rejected(self):
        with pytest.raises(PriceDataError, match="fraction"):
            series_from_rows(["2023-01-01T00:00:00Z,10.12345"])

    def test_wrong_header_rejected(self):
        with pytest.raises(PriceDataError, match="header"):
            load_prices(["start,price", "2023-01-01T00:00:00Z,10"])

    def test_price_above_cap_rejected(self):
        with pytest.raises(PriceDataError, match="cap"):
            series_from_rows(["2023-01-01T00:00:00Z,35.01"])

    def test_negative_price_passes_through(self):
        s = series_from_rows(["2023-01-01T00:00:00Z,-1.2"])
        assert s.slots[0].price == -1.2

    def test_year_offset_preserves_month_day_time(self):
        s = series_from_rows(
            ["2019-01-03T06:30:00Z,9.9", "2019-01-03T07:00:00Z,10.1"], year_offset=4
        )
        assert s.slots[0].start == datetime(2023, 1, 3, 6, 30, tzinfo=UTC)
        assert s.source_year_offset == 4

    def test_leap_day_dropped_when_target_year_lacks_it(self):
        # Leap-day rows vanish and the remap stays contiguous: Feb 28 23:30
        # + 30 min lands on Mar 1 00:00 in the non-leap target year.
        rows = (
            ["2020-02-28T23:00:00Z,10", "2020-02-28T23:30:00Z,10"]
            + [f"2020-02-29T{h:02d}:{m:02d}:00Z,10" for h in range(24) for m in (0, 30)]
            + ["2020-03-01T00:00:00Z,10"]
        )
        s = load_prices([CSV_HEADER] + rows, year_offset=3)
        assert len(s.slots) == 3
        assert s.slots[1].start == datetime(2023, 2, 28, 23, 30, tzinfo=UTC)
        assert s.slots[2].start == datetime(2023, 3, 1, 0, 0, tzinfo=UTC)


class TestPriceAt:
    def test_lookup_within_slot(self):
        start = datetime(2023, 1, 1, tzinfo=UTC)
        s = make_series(start, [10.0, 20.0])
        assert price_at(s, start) == 10.0
        assert price_at(s, start + timedelta(minutes=29)) == 10.0
        assert price_at(s, start + timedelta(minutes=30)) == 20.0

    def test_before_coverage_raises(self):
        start = datetime(2023, 1, 1, tzinfo=UTC)
        s = make_series(start, [10.0])
        with pytest.raises(MissingDataError):
            price_at(s, start - timedelta(minutes=1))
        with pytest.raises(MissingDataError):
            price_at(s, start + timedelta(minutes=30))

    def test_piecewise_constant(self):
        start = datetime(2023, 1, 1, tzinfo=UTC)
        s = synthetic_prices(start, days=1, seed=0)
        for offset in (0, 1, 17, 29):
            assert price_at(s, start + timedelta(minutes=offset)) == s.slots[0].price


class TestSummaries:
    def test_constant_day(self):
        start = datetime(2023, 1, 2, tzinfo=UTC)
        s = make_series(start, [12.0] * 48)
        summary = summarize(s, start + timedelta(hours=3), Window.DAY)
        assert summary.min == summary.max == summary.mean == 12.0

    def test_two_price_mean(self):
        start = datetime(2023, 1, 2, tzinfo=UTC)
        s = make_series(start, [10.0, 20.0])
        summary = summarize(s, start, Window.DAY)
        assert summary.mean == 15.0

    def test_week_starts_monday(self):
        t = datetime(2023, 1, 5, 14, 30, tzinfo=UTC)  # Thursday
        lo, hi = window_bounds(t, Window.WEEK)
        assert lo == datetime(2023, 1, 2, tzinfo=UTC)
        assert hi - lo == timedelta(days=7)

    def test_month_window(self):
        lo, hi = window_bounds(datetime(2023, 1, 31, 23, 59, tzinfo=UTC), Window.MONTH)
        assert lo == datetime(2023, 1, 1, tzinfo=UTC)
        assert hi == datetime(2023, 2, 1, tzinfo=UTC)

    def test_empty_window_raises(self):
        start = datetime(2023, 1, 2, tzinfo=UTC)
        s = make_series(start, [10.0])
        with pytest.raises(MissingDataError):
            summarize(s, start + timedelta(days=40), Window.DAY)

    def test_matches_brute_force_over_raw_rows(self):
        start = datetime(2023, 1, 2, tzinfo=UTC)
        s = synthetic_prices(start, days=9, seed=4)
        text = prices_to_csv_text(s)
        t = start + timedelta(days=3, hours=7)
        for window in Window:
            lo, hi = window_bounds(t, window)
            raw = []
            for line in text.splitlines()[1:]:
                stamp, price = line.split(",")
                at = parse_timestamp(stamp)
                if lo <= at < hi:
                    raw.append(float(price))
            summary = summarize(s, t, window)
            assert summary.min == min(raw)
            assert summary.max == max(raw)
            assert summary.mean == pytest.approx(sum(raw) / len(raw), rel=1e-12)
            assert summary.min <= summary.mean <= summary.max


class TestRoundTrip:
    def test_write_then_load_is_identity(self):
        start = datetime(2023, 3, 6, tzinfo=UTC)
        s = synthetic_prices(start, days=2, seed=9)
        again = load_prices(io.StringIO(prices_to_csv_text(s)))
        assert [(a.start, a.price) for a in again.slots] == [(a.start, a.price) for a in s.slots]
