import networkx as nx
import numpy as np
import pytest

from slacktune import Circuit, Policy, cx_depth, find_slack_windows, line_device, schedule
from slacktune.ir import GateKind, barrier, cx, delay, h, measure, x
from slacktune.sim import run_statevector
from slacktune.slicing import (
    SliceError,
    build_si_circuit,
    build_slice,
    make_si_builder,
    passes_depth_criteria,
    slice_indices,
)

from conftest import all_to_all_device, random_circuit


def cone_oracle(tc, w):
    """Reachability check: union of dependency cones of everything ending by
    the window edge equals the end-time cut."""
    g = nx.DiGraph()
    g.add_nodes_from(range(len(tc.timed)))
    last = {}
    for i, ti in enumerate(tc.timed):
        for q in ti.instr.qubits:
            if q in last:
                g.add_edge(last[q], i)
            last[q] = i
    edge = w.start + w.duration
    seeds = [i for i, ti in enumerate(tc.timed) if ti.end <= edge]
    cone = set(seeds)
    for i in seeds:
        cone |= nx.ancestors(g, i)
    return sorted(i for i in cone if tc.timed[i].instr.kind is not GateKind.MEASURE)


@pytest.fixture
def chain_example(small_device):
    c = Circuit(3, (cx(0, 1), cx(1, 2), x(0), cx(0, 1)))
    tc = schedule(c, small_device, Policy.ALAP)
    return c, tc, find_slack_windows(tc)[0]


class TestBuildSlice:
    def test_chain_example_cone(self, chain_example):
        c, tc, w = chain_example
        sl = build_slice(c, tc, w)
        assert [(i.kind, i.qubits) for i in sl.instructions] == [
            (GateKind.CX, (0, 1)), (GateKind.CX, (1, 2)), (GateKind.X, (0,))]

    def test_matches_reachability_oracle(self):
        rng = np.random.default_rng(77)
        dev = all_to_all_device(4)
        for _ in range(15):
            c = random_circuit(rng, 4, 25, measured=True)
            tc = schedule(c, dev, Policy.ALAP)
            for w in find_slack_windows(tc):
                assert slice_indices(tc, w) == cone_oracle(tc, w)

    def test_maximal_cone_is_whole_circuit(self, small_device):
        c = Circuit(2, (cx(0, 1), x(0), x(0), measure(0), measure(1)))
        tc = schedule(c, small_device, Policy.ALAP)
        w = next(w for w in find_slack_windows(tc) if w.qubit == 1)
        sl = build_slice(c, tc, w)
        assert sl.instructions == c.without_measurements().instructions

    def test_excludes_later_instructions(self, chain_example):
        c, tc, w = chain_example
        sl = build_slice(c, tc, w)
        assert all(i.qubits != (0, 1) or i.kind is not GateKind.MEASURE
                   for i in sl.instructions)
        assert len(sl.instructions) == 3  # final CX excluded

    def test_mismatched_pair_rejected(self, chain_example, small_device):
        c, tc, w = chain_example
        other = Circuit(3, (cx(0, 1),))
        with pytest.raises(SliceError):
            build_slice(other, tc, w)


class TestBuildSICircuit:
    def test_ground_truth_at_every_offset(self, chain_example, small_device):
        c, tc, w = chain_example
        builder = make_si_builder(c, tc, w, small_device)
        for offset in range(0, w.max_offset + 1, 4):
            si = builder(offset)
            amps = run_statevector(si.combined.to_circuit())
            assert abs(abs(amps[0]) - 1.0) < 1e-9

    def test_forward_ends_at_window_edge(self, chain_example, small_device):
        c, tc, w = chain_example
        si = make_si_builder(c, tc, w, small_device)(0)
        assert si.forward.total_duration == w.end
        assert max(ti.end for ti in si.forward.timed) <= w.end

    def test_inverse_block_mirrored(self, chain_example, small_device):
        c, tc, w = chain_example
        for offset in (0, 5, w.max_offset):
            si = make_si_builder(c, tc, w, small_device)(offset)
            inv_block = [ti for ti in si.inverse.timed
                         if ti.instr.kind is GateKind.X]
            assert len(inv_block) == 1
            mirrored = w.duration - offset - w.block_duration
            assert inv_block[0].start == w.end + mirrored

    def test_offset_out_of_range(self, chain_example, small_device):
        c, tc, w = chain_example
        builder = make_si_builder(c, tc, w, small_device)
        with pytest.raises(SliceError):
            builder(w.max_offset + 1)
        with pytest.raises(SliceError):
            builder(-1)

    def test_measures_cover_slice_qubits(self, chain_example, small_device):
        c, tc, w = chain_example
        si = make_si_builder(c, tc, w, small_device)(0)
        assert si.measured_qubits == (0, 1, 2)
        assert si.ground_truth == "000"

    def test_boundary_offsets_legal(self, chain_example, small_device):
        c, tc, w = chain_example
        builder = make_si_builder(c, tc, w, small_device)
        for offset in (0, w.max_offset):
            si = builder(offset)
            fwd_x = next(ti for ti in si.forward.timed if ti.instr.kind is GateKind.X)
            assert fwd_x.start == w.start + offset

    def test_window_delays_become_gaps(self, small_device):
        c = Circuit(1, (x(0), barrier(0), delay(40, 0), x(0), barrier(0), measure(0)))
        tc = schedule(c, small_device, Policy.ALAP)
        w = next(w for w in find_slack_windows(tc) if w.tunable)
        si = make_si_builder(c, tc, w, small_device)(0)
        # moved block: the explicit delay is dropped, idle survives as a gap
        kinds = [ti.instr.kind for ti in si.forward.timed]
        assert GateKind.DELAY not in kinds
        amps = run_statevector(si.combined.to_circuit())
        assert abs(abs(amps[0]) - 1.0) < 1e-9

    def test_si_depth_equals_twice_slice_depth(self):
        rng = np.random.default_rng(13)
        dev = all_to_all_device(4)
        for _ in range(10):
            c = random_circuit(rng, 4, 25, measured=True)
            tc = schedule(c, dev, Policy.ALAP)
            for w in find_slack_windows(tc):
                if not w.tunable:
                    continue
                si = make_si_builder(c, tc, w, dev)(w.max_offset)
                total = cx_depth(si.forward.to_circuit() + si.inverse.to_circuit())
                assert total == 2 * cx_depth(si.slice_circuit)
                assert cx_depth(si.slice_circuit) <= cx_depth(c)


class TestDepthCriteria:
    def _si_for(self, c, dev):
        tc = schedule(c, dev, Policy.ALAP)
        w = next(w for w in find_slack_windows(tc) if w.tunable)
        return make_si_builder(c, tc, w, dev)(w.max_offset)

    def test_shallow_slice_passes(self, small_device):
        # slice depth 2 against original depth 5: SI depth 4 <= 5
        c = Circuit(3, (cx(0, 1), x(0), cx(1, 2), cx(0, 1), cx(1, 2), cx(1, 2),
                        measure(0), measure(1), measure(2)))
        si = self._si_for(c, small_device)
        assert cx_depth(si.slice_circuit) == 2 and cx_depth(c) == 5
        assert passes_depth_criteria(si, c)

    def test_full_circuit_slice_fails(self, small_device):
        # window right-anchored at measure: slice is the whole circuit
        c = Circuit(2, (cx(0, 1), x(0), x(0), measure(0), measure(1)))
        tc = schedule(c, small_device, Policy.ALAP)
        w = next(w for w in find_slack_windows(tc) if w.qubit == 1)
        # untunable window; build explicitly to check the depth rule
        si = build_si_circuit(build_slice(c, tc, w), tc, w, 0, small_device)
        assert not passes_depth_criteria(si, c)

    def test_cx_free_cone_always_passes(self, small_device):
        c = Circuit(1, (x(0), barrier(0), delay(40, 0), x(0), barrier(0),
                        measure(0)))
        si = self._si_for(c, small_device)
        assert cx_depth(si.slice_circuit) == 0
        assert passes_depth_criteria(si, c)

    def test_exact_half_depth_boundary(self, small_device):
        # slice depth exactly original/2: 2*slice == original passes (<=)
        c = Circuit(3, (cx(0, 1), x(0), cx(1, 2), cx(0, 1), cx(1, 2),
                        measure(0), measure(1), measure(2)))
        si = self._si_for(c, small_device)
        assert cx_depth(si.slice_circuit) == 2 and cx_depth(c) == 4
        assert passes_depth_criteria(si, c)
