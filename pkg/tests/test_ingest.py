import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from econotherm import (
    CumulativePoints,
    DecileTable,
    IncomeBasis,
    OrderError,
    ScaleError,
    SchemaError,
    TableKind,
    UnitError,
    UnitHolder,
    cumulative_percents,
    from_cumulative,
    parse_table,
    read_tables,
    rescale,
    to_cumulative,
    write_table_csv,
)

HEADER = "country,year,month,kind,basis,holder,currency,scale_factor,decile,income"


def csv_text(rows, header=HEADER):
    return io.StringIO(header + "\n" + "\n".join(rows) + "\n")


def upper_rows(values, country="Finland", year=2008, currency="EUR", scale=""):
    return [
        f"{country},{year},,upper,net,individual,{currency},{scale},{i},{v}"
        for i, v in enumerate(values, start=1)
    ]


def mean_rows(values, country="Finland", year=1990, currency="EUR"):
    return [
        f"{country},{year},,mean,net,individual,{currency},,{i},{v}"
        for i, v in enumerate(values, start=1)
    ]


UPPER_VALUES = [12000, 15000, 18000, 21000, 24000, 27500, 31000, 36000, 44000]
MEAN_VALUES = [9000, 13000, 16000, 19000, 22000, 25000, 28500, 33000, 39000, 52000]


class TestParseTable:
    def test_upper_limit_schema_echo(self):
        t = parse_table(csv_text(upper_rows(UPPER_VALUES)))
        assert t.kind is TableKind.UPPER_LIMIT
        assert len(t.values) == 9
        assert t.country == "Finland" and t.year == 2008 and t.month is None
        assert t.income_basis is IncomeBasis.NET
        assert t.unit_holder is UnitHolder.INDIVIDUAL

    def test_duplicated_value_is_order_error(self):
        vals = list(MEAN_VALUES)
        vals[4] = vals[3]
        with pytest.raises(OrderError):
            parse_table(csv_text(mean_rows(vals)))

    def test_redenomination_scale_applied_and_currency_relabeled(self):
        rows = [
            f"Romania,2005,,mean,net,household,leu,0.0001,{i},{v}"
            for i, v in enumerate([int(v * 1e4) for v in np.linspace(700, 7000, 10)], start=1)
        ]
        t = parse_table(csv_text(rows))
        assert t.values == pytest.approx(tuple(np.linspace(700, 7000, 10)))
        assert t.currency != "leu"
        assert "leu" in t.currency and "0.0001" in t.currency
        assert t.scale_factor == pytest.approx(1e-4)

    def test_missing_column(self):
        bad_header = HEADER.replace(",income", "")
        rows = [r.rsplit(",", 1)[0] for r in upper_rows(UPPER_VALUES)]
        with pytest.raises(SchemaError, match="missing columns"):
            parse_table(csv_text(rows, header=bad_header))

    def test_wrong_row_count(self):
        with pytest.raises(SchemaError, match="expected 9"):
            parse_table(csv_text(upper_rows(UPPER_VALUES[:7])))

    def test_nonpositive_income(self):
        vals = list(UPPER_VALUES)
        vals[0] = 0
        with pytest.raises(UnitError):
            parse_table(csv_text(upper_rows(vals)))

    def test_error_names_file_and_row(self):
        vals = list(UPPER_VALUES)
        vals[2] = -5
        stream = csv_text(upper_rows(vals))
        stream.name = "income.csv"
        with pytest.raises(UnitError, match=r"income\.csv, row 4"):
            parse_table(stream)

    def test_unknown_kind(self):
        rows = [r.replace(",upper,", ",decile_share,") for r in upper_rows(UPPER_VALUES)]
        with pytest.raises(SchemaError):
            parse_table(csv_text(rows))

    def test_decile_out_of_sequence(self):
        rows = upper_rows(UPPER_VALUES)
        rows[3], rows[4] = rows[4], rows[3]
        with pytest.raises(SchemaError, match="out of sequence"):
            parse_table(csv_text(rows))

    def test_two_tables_in_one_stream(self):
        rows = mean_rows(MEAN_VALUES, year=1990) + mean_rows(
            [v * 1.1 for v in MEAN_VALUES], year=1991
        )
        tables = read_tables(csv_text(rows))
        assert [t.year for t in tables] == [1990, 1991]
        with pytest.raises(SchemaError, match="exactly one"):
            parse_table(csv_text(rows))

    def test_csv_roundtrip_including_scale(self):
        rows = [
            f"Romania,2005,,mean,net,household,leu,0.0001,{i},{int(v)}"
            for i, v in enumerate(np.linspace(7e6, 7e7, 10), start=1)
        ]
        t = parse_table(csv_text(rows))
        buf = io.StringIO()
        write_table_csv(t, buf)
        buf.seek(0)
        again = parse_table(buf)
        assert again.values == pytest.approx(t.values, rel=1e-15)
        assert again.currency == t.currency
        assert again.scale_factor == t.scale_factor


class TestToCumulative:
    def test_upper_limit_convention(self):
        vals = np.exp(np.linspace(9.0, 10.6, 9))
        t = DecileTable(
            country="X", year=2000, kind=TableKind.UPPER_LIMIT,
            income_basis=IncomeBasis.NET, unit_holder=UnitHolder.INDIVIDUAL,
            currency="u", scale_factor=1.0, values=tuple(vals),
        )
        pts = to_cumulative(t)
        assert pts.x[0] == pytest.approx(9.0)
        assert pts.y[0] == pytest.approx(math.log(90))
        assert pts.y[-1] == pytest.approx(math.log(10))

    def test_mean_midpoint_convention(self):
        vals = np.exp(np.linspace(9.0, 11.0, 10))
        t = DecileTable(
            country="X", year=2000, kind=TableKind.MEAN_INCOME,
            income_basis=IncomeBasis.NET, unit_holder=UnitHolder.INDIVIDUAL,
            currency="u", scale_factor=1.0, values=tuple(vals),
        )
        pts = to_cumulative(t, mean_offset=5.0)
        assert pts.y[0] == pytest.approx(math.log(95))
        assert pts.y[-1] == pytest.approx(math.log(5))
        assert pts.x[-1] == pytest.approx(11.0)
        # boundary convention: offset 0 starts at ln 100
        pts0 = to_cumulative(t, mean_offset=0.0)
        assert pts0.x[0] == pytest.approx(9.0)
        assert pts0.y[0] == pytest.approx(math.log(100))

    def test_offset_range_validated(self):
        for bad in (-0.1, 10.0, 12.0):
            with pytest.raises(ValueError):
                cumulative_percents(TableKind.MEAN_INCOME, bad)

    def test_transform_output_invariants(self):
        vals = np.exp(np.linspace(8.0, 10.0, 10))
        t = DecileTable(
            country="X", year=2000, kind=TableKind.MEAN_INCOME,
            income_basis=IncomeBasis.NET, unit_holder=UnitHolder.INDIVIDUAL,
            currency="u", scale_factor=1.0, values=tuple(vals),
        )
        pts = to_cumulative(t)
        assert np.all(np.diff(pts.x) > 0)
        assert np.all(np.diff(pts.y) < 0)
        assert np.all(pts.y > 0) and np.all(pts.y <= math.log(100))
        assert pts.source is t

    def test_transform_is_deterministic(self):
        vals = tuple(np.exp(np.linspace(8.0, 10.0, 10)))
        t = DecileTable(
            country="X", year=2000, kind=TableKind.MEAN_INCOME,
            income_basis=IncomeBasis.NET, unit_holder=UnitHolder.INDIVIDUAL,
            currency="u", scale_factor=1.0, values=vals,
        )
        a, b = to_cumulative(t), to_cumulative(t)
        assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)

    def test_median_monthly_uses_interior_levels(self):
        vals = np.exp(np.linspace(8.0, 10.0, 10))
        t = DecileTable(
            country="Hong Kong", year=1996, kind=TableKind.MEDIAN_MONTHLY,
            income_basis=IncomeBasis.NET, unit_holder=UnitHolder.HOUSEHOLD,
            currency="HKD", scale_factor=1.0, values=tuple(vals),
        )
        pts = to_cumulative(t)
        assert len(pts) == 10
        assert pts.y[0] == pytest.approx(math.log(95))

    def test_round_trip_to_table(self):
        vals = tuple(np.exp(np.linspace(8.0, 10.0, 10)))
        t = DecileTable(
            country="X", year=2000, kind=TableKind.MEAN_INCOME,
            income_basis=IncomeBasis.NET, unit_holder=UnitHolder.INDIVIDUAL,
            currency="u", scale_factor=1.0, values=vals,
        )
        back = from_cumulative(to_cumulative(t))
        assert back.values == pytest.approx(t.values, rel=1e-12)
        assert back.series_key() == t.series_key()
        with pytest.raises(ValueError):
            from_cumulative(CumulativePoints(x=np.arange(4.0), y=np.arange(4.0)[::-1]))


class TestRescale:
    def pts(self):
        return CumulativePoints(
            x=np.linspace(9.0, 11.0, 9), y=np.linspace(4.5, 2.3, 9)
        )

    def test_identity(self):
        p = self.pts()
        q = rescale(p, 1.0)
        assert np.array_equal(q.x, p.x) and np.array_equal(q.y, p.y)

    def test_redenomination_shift(self):
        p = self.pts()
        q = rescale(p, 10000.0)
        assert q.x - p.x == pytest.approx(np.full(9, math.log(10000)), abs=1e-15)
        assert np.array_equal(q.y, p.y)

    def test_dyadic_composition_exact(self):
        p = self.pts()
        twice = rescale(rescale(p, 0.5), 0.5)
        once = rescale(p, 0.25)
        assert np.array_equal(twice.x, once.x)

    @settings(max_examples=100, deadline=None)
    @given(s1=st.floats(1e-6, 1e6), s2=st.floats(1e-6, 1e6))
    def test_composition(self, s1, s2):
        p = CumulativePoints(x=np.linspace(0.0, 2.0, 5), y=np.linspace(4.0, 2.0, 5))
        a = rescale(rescale(p, s1), s2)
        b = rescale(p, s1 * s2)
        assert a.x == pytest.approx(b.x, abs=1e-9)

    def test_scale_error(self):
        for bad in (0.0, -2.0, float("nan"), float("inf")):
            with pytest.raises(ScaleError):
                rescale(self.pts(), bad)


class TestCumulativePointsContainer:
    def test_x_must_increase(self):
        with pytest.raises(ValueError):
            CumulativePoints(x=np.array([1.0, 1.0, 2.0, 3.0]), y=np.arange(4.0))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            CumulativePoints(x=np.arange(4.0), y=np.arange(5.0))

    def test_permissive_y_for_fit_inputs(self):
        # noisy / pathological point sets are still representable
        CumulativePoints(x=np.arange(4.0), y=np.array([2.0, 2.0, 2.0, 2.0]))
        CumulativePoints(x=np.arange(4.0), y=np.array([1.0, 2.0, 3.0, 4.0]))
