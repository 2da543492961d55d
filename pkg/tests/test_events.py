from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

from heatlab.events import (
    Category,
    EventKind,
    EventLog,
    EventRecord,
    FlashKind,
    QueryError,
    RenderError,
    format_price,
    format_temperature,
    render_flash,
    render_notification,
)
from heatlab.model import GaugeSegment

GOLDENS = Path(__file__).parent / "goldens"
UTC = timezone.utc
T0 = datetime(2023, 1, 16, 8, 0, tzinfo=UTC)

NOTIFICATION_MATRIX = [
    (EventKind.USER_SETPOINT, {"setpoint": 19, "mode": "override"}),
    (EventKind.USER_MODE, {"mode": "auto"}),
    (EventKind.PROFILE_RESET, {"profile": "Nights"}),
    (EventKind.SCHEDULE_EDIT, {}),
    (
        EventKind.SYSTEM_SETPOINT,
        {"setpoint": 18.5, "price": 14.2, "profile": "Evenings", "sensitivity": "High", "preferred": 21.8},
    ),
    (
        EventKind.PROFILE_UPDATE,
        {"profile": "Weekends", "setpoint": 20, "price": 8.4, "sensitivity": "Moderate", "preferred": 22.4},
    ),
]

FLASH_MATRIX = [
    (FlashKind.MODE, {"mode": "auto"}),
    (FlashKind.PRICE, {"price": 14.2}),
    (FlashKind.ACTIVE_PROFILE, {"profile": "Mornings"}),
    (FlashKind.SETPOINT, {"setpoint": 19.5}),
    (FlashKind.RESET_ALL, {}),
    (FlashKind.RESET_ONE, {"profile": "Nights"}),
    (FlashKind.SCHEDULE, {"day": "Monday"}),
]


def record(kind, payload, rid=1, visible=True, at=T0):
    return EventRecord(id=rid, at=at, kind=kind, payload=payload, visible=visible)


class TestTemplateGoldens:
    def test_notifications_byte_identical(self):
        rendered = "".join(
            render_notification(record(kind, payload)) + "\n" for kind, payload in NOTIFICATION_MATRIX
        )
        assert rendered.encode() == (GOLDENS / "notifications.txt").read_bytes()

    def test_flashes_byte_identical(self):
        rendered = "".join(render_flash(kind, payload) + "\n" for kind, payload in FLASH_MATRIX)
        assert rendered.encode() == (GOLDENS / "flashes.txt").read_bytes()

    def test_sensitivity_labels_byte_identical(self):
        rendered = "".join(segment.value + "\n" for segment in GaugeSegment)
        assert rendered.encode() == (GOLDENS / "sensitivity_labels.txt").read_bytes()


class TestFormatting:
    def test_whole_degrees_elide_decimal(self):
        assert format_temperature(19) == "19"
        assert format_temperature(19.0) == "19"

    def test_half_degrees_keep_one_decimal(self):
        assert format_temperature(18.5) == "18.5"

    def test_learned_means_round_to_one_decimal(self):
        assert format_temperature(21.7936) == "21.8"

    def test_prices(self):
        assert format_price(14.2) == "14.2"
        assert format_price(8.0) == "8"


class TestRendering:
    def test_missing_parameter_raises(self):
        with pytest.raises(RenderError, match="mode"):
            render_notification(record(EventKind.USER_SETPOINT, {"setpoint": 19}))
        with pytest.raises(RenderError):
            render_flash(FlashKind.PRICE, {})

    def test_category_mapping(self):
        user_kinds = {EventKind.USER_SETPOINT, EventKind.USER_MODE, EventKind.PROFILE_RESET, EventKind.SCHEDULE_EDIT}
        for kind, payload in NOTIFICATION_MATRIX:
            rec = record(kind, payload)
            expected = Category.USER if kind in user_kinds else Category.SYSTEM
            assert rec.category is expected


class TestEventLog:
    def build_log(self, n=25, hidden=()):
        log = EventLog()
        for i in range(n):
            log.append(
                T0 + timedelta(minutes=i),
                EventKind.SYSTEM_SETPOINT,
                {"setpoint": 19, "price": 10, "profile": "Nights", "sensitivity": "High", "preferred": 22},
                visible=i not in hidden,
            )
        return log

    def test_ids_strictly_increase(self):
        log = self.build_log(10)
        ids = [r.id for r in log.records]
        assert ids == sorted(ids) and len(set(ids)) == len(ids)

    def test_user_filter_on_system_only_log_is_empty(self):
        log = self.build_log(5)
        page, total = log.query(categories={Category.USER})
        assert page == [] and total == 0

    def test_pagination_shape(self):
        log = self.build_log(25)
        p1, total = log.query(page=1, page_size=10)
        p2, _ = log.query(page=2, page_size=10)
        p3, _ = log.query(page=3, page_size=10)
        assert total == 25
        assert (len(p1), len(p2), len(p3)) == (10, 10, 5)
        assert p1[0].id == 25  # newest first

    def test_hidden_records_excluded_from_every_page(self):
        hidden = {3, 7, 11}
        log = self.build_log(25, hidden=hidden)
        seen = []
        for page in (1, 2, 3):
            records, total = log.query(page=page, page_size=10)
            seen += [r.id for r in records]
        assert total == 22
        assert all(log.records[i].id not in seen for i in hidden)

    def test_date_range_filter(self):
        log = self.build_log(25)
        start = T0 + timedelta(minutes=5)
        end = T0 + timedelta(minutes=9)
        records, total = log.query(start=start, end=end)
        assert total == 5
        assert all(start <= r.at <= end for r in records)

    def test_inverted_range_rejected(self):
        log = self.build_log(3)
        with pytest.raises(QueryError):
            log.query(start=T0 + timedelta(hours=1), end=T0)

    def test_bad_page_size_rejected(self):
        with pytest.raises(QueryError):
            self.build_log(3).query(page_size=0)

    def test_dump_round_trips_all_records(self):
        log = self.build_log(4, hidden={1})
        lines = log.dump().strip().splitlines()
        assert len(lines) == 4
        assert len(log.dump(include_hidden=False).strip().splitlines()) == 3
