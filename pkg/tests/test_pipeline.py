import hashlib

import numpy as np
import pytest

from topocnot.arch import builtin_architecture, parse_architecture
from topocnot.errors import DisconnectedGraph, InvalidParams, ParseError, SingularMatrix, TooManyQubits
from topocnot.gf2 import BitMatrix, CnotGate, circuit_matrix
from topocnot.pipeline import (
    BenchConfig,
    CompileOptions,
    bench_table,
    bundled_text,
    circuit_seed,
    compile_pipeline,
    load_input,
    load_reference,
    mixcolumns_matrix,
    random_circuit,
)
from topocnot.placer import Placement, export_milp, interaction_graph
from topocnot.router import verify_routed

MIXCOLUMNS_SHA256 = "a50ec3de3707aecf53aa8c91f67a1d51d1a521819b31edfcccd763b3cd05e77c"


def xtime(x):
    return ((x << 1) & 0xFF) ^ (0x1B if x & 0x80 else 0)


def mix_column(col):
    """Textbook AES MixColumns on one 4-byte column."""
    a0, a1, a2, a3 = col
    b = [xtime(x) for x in col]
    return [
        b[0] ^ a1 ^ b[1] ^ a2 ^ a3,
        a0 ^ b[1] ^ a2 ^ b[2] ^ a3,
        a0 ^ a1 ^ b[2] ^ a3 ^ b[3],
        a0 ^ b[0] ^ a1 ^ a2 ^ b[3],
    ]


def test_random_circuit_contract():
    gates = random_circuit(9, 3, seed=1)
    assert len(gates) == 3
    assert all(1 <= x <= 9 for g in gates for x in (g.control, g.target))
    assert random_circuit(6, 0, seed=4) == []
    assert random_circuit(5, 100, seed=7) == random_circuit(5, 100, seed=7)
    assert random_circuit(5, 100, seed=7) != random_circuit(5, 100, seed=8)


def test_random_circuit_errors():
    with pytest.raises(InvalidParams):
        random_circuit(1, 3, seed=0)
    with pytest.raises(InvalidParams):
        random_circuit(4, -1, seed=0)


def test_random_circuit_is_roughly_uniform():
    gates = random_circuit(3, 6000, seed=0)
    counts = {}
    for g in gates:
        counts[(g.control, g.target)] = counts.get((g.control, g.target), 0) + 1
    assert len(counts) == 6
    assert all(abs(c - 1000) < 150 for c in counts.values())


def test_compile_fixture_exhaustive(fixture_matrix, t_graph):
    result = compile_pipeline(fixture_matrix, t_graph, CompileOptions(place="exhaustive"))
    assert result.circuit.size == 16
    assert result.stats["objective"] == 16
    assert result.stats["decomposition_length"] == 7
    assert verify_routed(result.circuit, fixture_matrix)


def test_compile_identity_is_free():
    result = compile_pipeline(BitMatrix.identity(4), builtin_architecture("9q-square"))
    assert result.circuit.size == 0 and result.stats["gates"] == 0


def test_compile_circuit_input_uses_device_size():
    gates = [CnotGate(1, 9), CnotGate(9, 5)]
    result = compile_pipeline(gates, builtin_architecture("9q-square"))
    assert result.circuit.placement.n == 9
    assert verify_routed(result.circuit, circuit_matrix(gates, 9))


def test_compile_errors(t_graph):
    with pytest.raises(TooManyQubits):
        compile_pipeline(BitMatrix.identity(6), t_graph)
    with pytest.raises(SingularMatrix):
        compile_pipeline(BitMatrix.from_lists([[1, 1], [1, 1]]), t_graph)
    with pytest.raises(DisconnectedGraph):
        compile_pipeline(BitMatrix.identity(2), parse_architecture("qubits 3\nedge 1 2"))
    with pytest.raises(InvalidParams):
        compile_pipeline(BitMatrix.identity(2), t_graph, CompileOptions(place="import"))
    with pytest.raises(InvalidParams):
        compile_pipeline(BitMatrix.identity(2), t_graph, CompileOptions(place="anneal"))


def test_compile_import_round_trip(fixture_matrix, t_graph, t_table):
    sol = Placement((2, 3, 5, 4, 1)).to_text()
    result = compile_pipeline(fixture_matrix, t_graph, CompileOptions(place="import", solution=sol))
    assert result.circuit.placement.assign == (2, 3, 5, 4, 1)
    assert verify_routed(result.circuit, fixture_matrix)


def test_compile_stats_keys(fixture_matrix):
    result = compile_pipeline(fixture_matrix, builtin_architecture("16q-square"), CompileOptions(restarts=2))
    assert set(result.stats) >= {"decomposition_length", "objective", "gates", "depth", "wall_time_ms", "placement"}
    assert result.stats["gates"] == result.stats["objective"]


def test_compile_emit_swaps(fixture_matrix, t_graph):
    result = compile_pipeline(fixture_matrix, t_graph, CompileOptions(place="exhaustive", emit_swaps=True))
    assert result.circuit.output_relabel == result.circuit.placement.assign
    assert verify_routed(result.circuit, fixture_matrix)


def test_gauss_jordan_only_option(fixture_matrix, t_graph):
    result = compile_pipeline(fixture_matrix, t_graph, CompileOptions(place="exhaustive", greedy_trials=0))
    assert result.stats["decomposition"] == "gauss-jordan"
    assert result.circuit.size == 16


def test_load_input_formats(fixture_matrix):
    a, gates = load_input(fixture_matrix.to_text())
    assert a == fixture_matrix and gates is None
    a, gates = load_input("# comment\nqubits 3\ncnot 1 2\ncnot 2 3\n")
    assert gates == [CnotGate(1, 2), CnotGate(2, 3)]
    assert a == circuit_matrix(gates, 3)
    with pytest.raises(ParseError):
        load_input("edge 1 2\n")


def test_mixcolumns_fixture_checksum_and_rank():
    text = bundled_text("mixcolumns.matrix")
    m = mixcolumns_matrix()
    assert hashlib.sha256(m.to_text().encode()).hexdigest() == MIXCOLUMNS_SHA256
    assert m.rank() == 32
    assert text.startswith("#")


def test_mixcolumns_matches_textbook_definition():
    m = mixcolumns_matrix().to_array()
    rng = np.random.default_rng(0)
    for _ in range(50):
        col = [int(x) for x in rng.integers(0, 256, 4)]
        bits = np.array([(col[k // 8] >> (k % 8)) & 1 for k in range(32)])
        out = (m @ bits) % 2
        got = [sum(int(out[8 * b + i]) << i for i in range(8)) for b in range(4)]
        assert got == mix_column(col)


def test_circuit_seed_is_order_independent():
    assert circuit_seed(1, 5, 3) == circuit_seed(1, 5, 3)
    assert len({circuit_seed(1, c, i) for c in (3, 5) for i in range(20)}) == 40


def test_bench_zero_gates():
    report = bench_table(BenchConfig("9q-square", [0], per_count=1))
    assert report.rows[0].mean == 0


def test_bench_reproducible_and_ordered():
    cfg = BenchConfig("9q-square", [5, 3], per_count=4, seed=2)
    one, two = bench_table(cfg), bench_table(cfg)
    assert [r.counts for r in one.rows] == [r.counts for r in two.rows]
    assert [r.gates for r in one.rows] == [5, 3]
    assert one.rows[0].min <= one.rows[0].mean <= one.rows[0].max


def test_bench_parallel_matches_serial():
    serial = bench_table(BenchConfig("9q-square", [4], per_count=4, seed=9))
    parallel = bench_table(BenchConfig("9q-square", [4], per_count=4, seed=9, jobs=2))
    assert serial.rows[0].counts == parallel.rows[0].counts


def test_bench_config_validation():
    with pytest.raises(InvalidParams):
        BenchConfig("9q-square", [-1])
    with pytest.raises(InvalidParams):
        BenchConfig("9q-square", [3], per_count=0)


def test_bench_reference_join():
    ref = load_reference(bundled_text("reference_means.csv"))
    assert ref[("9q-square", 3)]["published"] == 2.95
    assert len(ref) == 19
    report = bench_table(BenchConfig("9q-square", [3], per_count=3), ref)
    row = report.rows[0]
    assert row.reference["steiner"] == 3
    assert row.delta_vs_steiner == pytest.approx(100 * (3 - row.mean) / 3)
    header = report.to_csv().splitlines()[0].split(",")
    assert header[:6] == ["architecture", "gates", "mean", "min", "max", "runtime_ms"]
    assert header[-1] == "delta_vs_steiner_pct"


def test_reference_requires_key_columns():
    with pytest.raises(ParseError):
        load_reference("arch,count\nx,1\n")


def test_exported_milp_matches_chosen_decomposition(fixture_matrix, t_graph):
    from topocnot.arch import all_pairs_distances
    from topocnot.pipeline import milp_text

    result = compile_pipeline(fixture_matrix, t_graph, CompileOptions(place="exhaustive"))
    expected = export_milp(interaction_graph(result.decomposition), all_pairs_distances(t_graph))[1]
    assert milp_text(result, t_graph) == expected
