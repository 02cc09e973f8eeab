"""Published result tables, stored exactly as printed.

Numbers are kept as their printed text (trailing zeros included) and parsed
on access.  Known inconsistencies between tables are kept, not corrected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .stats import ConfusionTable

TABLE_IDS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7")


@dataclass(frozen=True)
class FixtureTable:
    table_id: str
    title: str
    columns: tuple[str, ...]
    text_rows: tuple[tuple[str, ...], ...]

    @property
    def rows(self) -> list[tuple]:
        """Rows with the label first and numeric cells as floats (None if blank)."""
        return [(r[0], *(float(v) if v else None for v in r[1:])) for r in self.text_rows]

    def row(self, label: str) -> tuple:
        for r in self.rows:
            if r[0] == label:
                return r[1:]
        raise KeyError(f"{self.table_id} has no row {label!r}")

    def column(self, name: str) -> list[float]:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        out = [",".join(self.columns)]
        out += [",".join(r) for r in self.text_rows]
        return "\n".join(out) + "\n"


_T1 = (
    ("dcm 0001", "5544.68", "8078.32"),
    ("dcm 0002", "5724.76", "7410.38"),
    ("dcm 0003", "7096.77", "10381.9"),
    ("dcm 0004", "6101.77", "6478.89"),
    ("dcm 0005", "6174.82", "8193.23"),
    ("dcm 0006", "6507.84", "9757.81"),
    ("dcm 0007", "7484.48", "10326.94"),
    ("dcm 0008", "6661.52", "6985.06"),
    ("dcm 0009", "5992.41", "5992.17"),
    ("dcm 0010", "6417.38", "6972.39"),
    ("dcm 0011", "6001.4", "5982.37"),
    ("dcm 0012", "7240.49", "6198.58"),
    ("dcm 0013", "6201.82", "9034.32"),
    ("dcm 0014", "5966.33", "5842.39"),
    ("dcm 0015", "6024.03", "7830.31"),
    ("dcm 0016", "5714.79", "6135.71"),
    ("dcm 0017", "5557.94", "5924.59"),
    ("dcm 0018", "7182.26", "9330.04"),
    ("dcm 0019", "5450.78", "7041.98"),
    ("dcm 0020", "6023.86", "5957.58"),
)

_T2 = (
    ("dcm 0001", "1138.9128", "1200.9820", "1234.8677"),
    ("dcm 0002", "1213.9390", "1273.5073", "1305.3644"),
    ("dcm 0003", "912.0454", "985.4192", "1032.4355"),
    ("dcm 0004", "965.0731", "1024.0330", "1062.7660"),
    ("dcm 0005", "848.7616", "908.4071", "948.0895"),
    ("dcm 0006", "858.5535", "919.0936", "960.0879"),
    ("dcm 0007", "857.2325", "927.1354", "969.5507"),
    ("dcm 0008", "734.0570", "808.2034", "855.7769"),
    ("dcm 0009", "676.9681", "751.9430", "802.0007"),
    ("dcm 0010", "765.6439", "837.8734", "881.9957"),
    ("dcm 0011", "782.6192", "851.3009", "895.5168"),
    ("dcm 0012", "876.5664", "935.8310", "974.4636"),
    ("dcm 0013", "1000.3647", "1059.5208", "1095.0401"),
    ("dcm 0014", "1003.1925", "1068.2832", "1104.3974"),
    ("dcm 0015", "1026.7828", "1095.1051", "1131.4206"),
    ("dcm 0016", "1067.1361", "1137.2907", "1172.9960"),
    ("dcm 0017", "1194.5449", "1257.6472", "1290.4847"),
    ("dcm 0018", "1176.3578", "1232.5629", "1267.2867"),
    ("dcm 0019", "1098.3993", "1156.7749", "1191.4239"),
    ("dcm 0020", "1109.3291", "1157.2493", "1181.3063"),
)

_T3 = (
    ("1", "5544.4807", "11086.7877", "8078.2439", "16157.1898"),
    ("2", "7181.9884", "14364.0413", "9330.1503", "18660.5707"),
    ("3", "5558.1511", "11117.9896", "5924.6644", "11850.9655"),
    ("4", "5714.7921", "11429.2792", "6135.6891", "12273.3048"),
    ("5", "5023.7532", "12048.4203", "7830.3322", "15663.1586"),
    ("6", "5966.3444", "11932.9385", "5842.4854", "11684.4111"),
    ("7", "5201.7292", "12405.2023", "9034.2843", "18067.9178"),
    ("8", "7240.853", "14482.1577", "6198.6079", "12401.7001"),
    ("9", "5001.4699", "12002.7776", "5982.453", "11965.1671"),
    ("10", "5417.1673", "12836.4429", "5972.2216", "13943.6979"),
    ("11", "5992.5", "11984.7077", "5992.1492", "11984.4634"),
    ("12", "5661.4586", "13324.6943", "5985.1401", "13973.7904"),
    ("13", "7484.6984", "14968.1884", "10327.1069", "20659.262"),
    ("14", "5507.8144", "13017.8913", "9757.7571", "19514.2742"),
    ("15", "5174.883", "12349.7042", "8193.1116", "16388.2526"),
    ("16", "5101.946", "12203.2147", "5478.8401", "12960.4942"),
    ("17", "7096.3922", "14191.5997", "10381.9172", "20764.6702"),
    ("18", "5724.8007", "11450.6902", "7410.2646", "14823.074"),
    ("19", "5450.6741", "10901.116", "7041.9858", "14083.6771"),
    ("20", "5023.8499", "12049.4355", "5957.4332", "11916.3526"),
)

# (condition, CN, FN, FP, CP); "5s" is the fixed five-second exposure,
# "observer" the self-paced exposure
_T4 = (("5s", "88.7", "91.4", "11.3", "8.6"), ("observer", "86.5", "91.4", "13.5", "8.6"))
_T5 = (("5s", "87.5", "82.0", "12.5", "18.0"), ("observer", "87.0", "77.4", "13.0", "22.6"))
_T6 = (("5s", "85.5", "66.4", "14.5", "33.6"), ("observer", "86.5", "60.9", "13.5", "39.1"))

# (dot size increase, QE, CP 5s, FP 5s, CP observer, FP observer)
_T7 = (
    ("0%", "750.3749", "", "", "", ""),
    ("5%", "750.4555", "8.6", "13", "8.6", "13"),
    ("10%", "751.7827", "18", "13", "22.6", "13"),
    ("30%", "754.4679", "33.6", "13", "39.1", "13"),
)

_CONFUSION_COLUMNS = ("condition", "cn", "fn", "fp", "cp")

_TABLES = {
    "T1": FixtureTable("T1", "QE of two clinical visits", ("image", "qe_1st", "qe_2nd"), _T1),
    "T2": FixtureTable("T2", "QE with synthetic lesions added",
                       ("image", "original", "lesion_1", "lesions_2"), _T2),
    "T3": FixtureTable("T3", "QE before and after Poisson noise",
                       ("row", "clinical_1", "noised_1", "clinical_2", "noised_2"), _T3),
    "T4": FixtureTable("T4", "Response rates, 5% dot size increase", _CONFUSION_COLUMNS, _T4),
    "T5": FixtureTable("T5", "Response rates, 10% dot size increase", _CONFUSION_COLUMNS, _T5),
    "T6": FixtureTable("T6", "Response rates, 30% dot size increase", _CONFUSION_COLUMNS, _T6),
    "T7": FixtureTable("T7", "Dot field QE and detection rates",
                       ("increase", "qe", "cp_5s", "fp_5s", "cp_observer", "fp_observer"), _T7),
}


def paper_fixture(table_id: str) -> FixtureTable:
    try:
        return _TABLES[table_id.upper()]
    except KeyError:
        raise KeyError(f"unknown table {table_id!r}; choose from {', '.join(TABLE_IDS)}") from None


def confusion_tables(table_id: str) -> dict[str, ConfusionTable]:
    """Tables T4-T6 as {condition: ConfusionTable}."""
    t = paper_fixture(table_id)
    if t.columns != _CONFUSION_COLUMNS:
        raise KeyError(f"{table_id} is not a response-rate table")
    return {r[0]: ConfusionTable(cn=r[1], fn=r[2], fp=r[3], cp=r[4]) for r in t.rows}
