import networkx as nx
import numpy as np
import pytest

from slacktune import (
    Circuit,
    Policy,
    SchedulingError,
    find_slack_windows,
    line_device,
    schedule,
    timed_to_circuit,
    total_duration,
)
from slacktune.ir import GateKind, barrier, cx, delay, h, instruction_duration, measure, x
from slacktune.sched import assign_start_times, schedule_from_dict, schedule_to_dict
from slacktune.sim import output_probabilities

from conftest import all_to_all_device, random_circuit


def oracle_schedule(c, dev, policy):
    """Reference scheduler: explicit dependency DAG + longest-path passes."""
    g = nx.DiGraph()
    durations = [instruction_duration(ins, dev) for ins in c.instructions]
    g.add_nodes_from(range(len(c.instructions)))
    last_on = {}
    for i, ins in enumerate(c.instructions):
        for q in ins.qubits:
            if q in last_on:
                g.add_edge(last_on[q], i)
            last_on[q] = i
    earliest = {}
    for i in nx.topological_sort(g):
        earliest[i] = max((earliest[j] + durations[j] for j in g.predecessors(i)),
                          default=0)
    makespan = max((earliest[i] + durations[i] for i in g.nodes), default=0)
    if policy == "asap":
        return [earliest[i] for i in range(len(c.instructions))], makespan
    latest = {}
    for i in reversed(list(nx.topological_sort(g))):
        latest[i] = min((latest[j] for j in g.successors(i)), default=makespan) - durations[i]
    return [latest[i] for i in range(len(c.instructions))], makespan


@pytest.fixture
def chain_circuit():
    return Circuit(3, (cx(0, 1), cx(1, 2), x(0), cx(0, 1)))


class TestSchedulePolicies:
    def test_alap_example(self, chain_circuit, small_device):
        tc = schedule(chain_circuit, small_device, Policy.ALAP)
        assert [ti.start for ti in tc.timed] == [0, 20, 36, 40]
        assert tc.total_duration == 60

    def test_asap_example(self, chain_circuit, small_device):
        tc = schedule(chain_circuit, small_device, Policy.ASAP)
        assert [ti.start for ti in tc.timed] == [0, 20, 20, 40]

    def test_middle_example(self, chain_circuit, small_device):
        tc = schedule(chain_circuit, small_device, Policy.MIDDLE)
        x_timed = next(ti for ti in tc.timed if ti.instr.kind is GateKind.X)
        assert x_timed.start == 28  # window [20, 40), block 4, offset 8

    @pytest.mark.parametrize("policy", ["asap", "alap"])
    def test_matches_reference_oracle(self, policy):
        rng = np.random.default_rng(42)
        dev = all_to_all_device(4, sq_duration=3, cx_duration=17, measure_duration=9)
        for _ in range(20):
            c = random_circuit(rng, 4, 25, p_delay=0.1, measured=True)
            starts, makespan = assign_start_times(c, dev, Policy(policy))
            want_starts, want_makespan = oracle_schedule(c, dev, policy)
            assert starts == want_starts
            assert makespan == want_makespan

    def test_policy_equivalence(self):
        rng = np.random.default_rng(9)
        dev = all_to_all_device(4)
        for _ in range(10):
            c = random_circuit(rng, 4, 20, measured=True)
            schedules = {p: schedule(c, dev, p) for p in Policy}
            durations = {tc.total_duration for tc in schedules.values()}
            assert len(durations) == 1
            instr_sets = {tuple(sorted((ti.instr.kind.value, ti.instr.qubits)
                                       for ti in tc.timed))
                          for tc in schedules.values()}
            assert len(instr_sets) == 1

    def test_noiseless_distribution_invariant_across_policies(self):
        rng = np.random.default_rng(17)
        dev = all_to_all_device(3)
        for _ in range(5):
            c = random_circuit(rng, 3, 15, measured=True)
            dists = [output_probabilities(schedule(c, dev, p).to_circuit())
                     for p in Policy]
            for other in dists[1:]:
                assert set(other) == set(dists[0])
                for k, v in dists[0].items():
                    assert other[k] == pytest.approx(v, abs=1e-12)

    def test_validation_failure_raises(self):
        with pytest.raises(SchedulingError, match="uncoupled"):
            schedule(Circuit(3, (cx(0, 2),)), line_device(3), Policy.ALAP)


class TestTotalDuration:
    def test_example_total(self, chain_circuit, small_device):
        assert total_duration(schedule(chain_circuit, small_device, Policy.ALAP)) == 60

    def test_empty_circuit(self, small_device):
        assert total_duration(schedule(Circuit(2, ()), small_device, Policy.ALAP)) == 0

    def test_single_gate(self, small_device):
        assert total_duration(schedule(Circuit(1, (x(0),)), small_device, Policy.ALAP)) == 4


class TestSlackWindows:
    def test_alap_example_window(self, chain_circuit, small_device):
        tc = schedule(chain_circuit, small_device, Policy.ALAP)
        windows = find_slack_windows(tc)
        assert len(windows) == 1
        w = windows[0]
        assert (w.qubit, w.start, w.duration) == (0, 20, 20)
        assert [ti.instr.kind for ti in w.gate_block] == [GateKind.X]
        assert w.max_offset == 16

    def test_pre_first_op_time_excluded(self, small_device):
        tc = schedule(Circuit(2, (x(0), cx(0, 1))), small_device, Policy.ALAP)
        assert [w.qubit for w in find_slack_windows(tc)] == []

    def test_explicit_delay_window(self, small_device):
        c = Circuit(2, (cx(0, 1), delay(50, 0), cx(0, 1)))
        tc = schedule(c, small_device, Policy.ALAP)
        windows = find_slack_windows(tc)
        w0 = next(w for w in windows if w.qubit == 0)
        assert (w0.start, w0.duration, w0.gate_block) == (20, 50, ())
        # the partner qubit idles over the same span, symmetrically
        w1 = next(w for w in windows if w.qubit == 1)
        assert (w1.start, w1.duration) == (20, 50)

    def test_trailing_idle_has_no_right_anchor(self, chain_circuit, small_device):
        # qubit 2 idles after its last CX but nothing anchors the right edge
        tc = schedule(chain_circuit, small_device, Policy.ALAP)
        assert all(w.qubit != 2 for w in find_slack_windows(tc))

    def test_measurement_adjacent_idle_counts(self, small_device):
        # q1 finishes early but its measure is pinned late by q0's chain
        c = Circuit(2, (cx(0, 1), x(1), x(0), x(0), measure(0), measure(1)))
        tc = schedule(c, small_device, Policy.ALAP)
        w = next(w for w in find_slack_windows(tc) if w.qubit == 1)
        assert tc.timed[w.right_anchor].instr.kind is GateKind.MEASURE
        assert [ti.instr.kind for ti in w.gate_block] == [GateKind.X]

    def test_barrier_cuts_windows(self, small_device):
        c = Circuit(2, (cx(0, 1), delay(30, 0), barrier(0), delay(30, 0), cx(0, 1)))
        tc = schedule(c, small_device, Policy.ALAP)
        wins = [w for w in find_slack_windows(tc) if w.qubit == 0]
        assert [w.duration for w in wins] == [30, 30]

    def test_alap_blocks_flush_right(self):
        rng = np.random.default_rng(23)
        dev = all_to_all_device(4)
        for _ in range(10):
            c = random_circuit(rng, 4, 25, measured=True)
            tc = schedule(c, dev, Policy.ALAP)
            for w in find_slack_windows(tc):
                if w.gate_block:
                    assert w.gate_block[-1].end == w.end

    def test_window_tiling(self):
        # windows + busy intervals + pre-first-op tile [0, total) per qubit
        rng = np.random.default_rng(31)
        dev = all_to_all_device(4)
        for _ in range(10):
            c = random_circuit(rng, 4, 25, measured=True)
            tc = schedule(c, dev, Policy.ALAP)
            windows = find_slack_windows(tc)
            for q in range(4):
                items = tc.on_qubit(q)
                if not items:
                    continue
                segments = [(0, items[0][1].start)]
                segments += [(w.start, w.end) for w in windows if w.qubit == q]
                covered = {i for w in windows if w.qubit == q for i in w.block}
                for i, ti in items:
                    if i not in covered and not (
                            ti.instr.kind is GateKind.DELAY
                            and any(w.qubit == q and w.start <= ti.start and ti.end <= w.end
                                    for w in windows)):
                        segments.append((ti.start, ti.end))
                segments = sorted(s for s in segments if s[1] > s[0])
                cursor = 0
                for lo, hi in segments:
                    assert lo == cursor
                    cursor = hi
                assert cursor == tc.total_duration


class TestTimedRoundTrips:
    def test_timed_to_circuit_preserves_starts_under_asap(self, small_device):
        rng = np.random.default_rng(7)
        dev = all_to_all_device(4)
        c = random_circuit(rng, 4, 20, measured=True)
        tc = schedule(c, dev, Policy.ALAP)
        rebuilt = schedule(timed_to_circuit(tc), dev, Policy.ASAP)
        original = sorted((ti.start, ti.instr.kind.value, ti.instr.qubits)
                          for ti in tc.timed)
        redone = sorted((ti.start, ti.instr.kind.value, ti.instr.qubits)
                        for ti in rebuilt.timed if ti.instr.kind is not GateKind.DELAY)
        assert original == redone

    def test_schedule_dict_round_trip(self, chain_circuit, small_device):
        tc = schedule(chain_circuit, small_device, Policy.ALAP)
        doc = schedule_to_dict(tc)
        back = schedule_from_dict(doc, small_device)
        assert back.total_duration == tc.total_duration
        assert [(ti.instr.kind, ti.start) for ti in back.timed] == \
               [(ti.instr.kind, ti.start) for ti in tc.timed]
