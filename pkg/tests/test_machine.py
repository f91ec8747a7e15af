"""Tests for validation, flattening and trace checks."""

import pytest

from statecover.exceptions import OrthogonalRegionUnsupported, SemanticError, SuiteInconsistent, UnknownState
from statecover.generator import generate_ftc_suite
from statecover.interpreter import run
from statecover.machine import check_suite, check_trace, flatten, in_set, out_set, validate
from statecover.models import InputEvent, State, Statechart, StateKind, TestCase, Transition
from statecover.parser import parse_statechart
from tests.oracles import event_traces


def codes(violations):
    return sorted(str(v) for v in violations)


@pytest.mark.unit
class TestValidate:
    def test_atm_is_valid(self, atm):
        assert validate(atm) == []

    def test_hierarchical_is_valid(self, hierarchical):
        assert validate(hierarchical) == []

    def test_unreachable_state(self):
        sc = parse_statechart(
            "statechart C\nevents e\nstate A initial\nstate B final\nstate Lost final\ntransition t: A -> B on e\n"
        )
        assert codes(validate(sc)) == ["unreachable(Lost)"]

    def test_dead_end_state(self):
        sc = parse_statechart(
            "statechart C\nevents e f\nstate A initial\nstate B final\nstate Trap\n"
            "transition t1: A -> B on e\ntransition t2: A -> Trap on f\n"
        )
        assert codes(validate(sc)) == ["cannot-reach-final(Trap)"]

    def test_missing_initial_and_final(self):
        sc = Statechart(name="Bare", states=(State(id="A"),))
        assert codes(validate(sc)) == ["missing-initial", "no-final"]

    def test_reserved_transition_id(self):
        sc = Statechart(
            name="C",
            events=("e",),
            states=(State(id="A", is_initial=True, is_final=True),),
            transitions=(Transition(id="ti", source="A", target="A", event="e"),),
        )
        assert "reserved-id(ti)" in codes(validate(sc))

    def test_composite_without_entry(self):
        sc = Statechart(
            name="C",
            states=(
                State(id="Top", kind=StateKind.COMPOSITE, is_initial=True, is_final=True),
                State(id="Inner", parent="Top"),
            ),
        )
        assert "missing-entry(Top)" in codes(validate(sc))

    def test_structural_problems_skip_reachability(self):
        sc = Statechart(
            name="C",
            events=("e",),
            states=(State(id="A", is_initial=True), State(id="B", is_initial=True, is_final=True), State(id="Z")),
        )
        assert codes(validate(sc)) == ["multiple-initial"]


@pytest.mark.unit
class TestFlatten:
    def test_flat_chart_is_unchanged(self, atm):
        assert flatten(atm) is atm

    def test_player_states(self, flat_player):
        assert [s.id for s in flat_player.states] == ["Done", "Off", "Paused", "Playing"]
        assert flat_player.is_flat
        assert flat_player.initial_state().id == "Off"
        assert [s.id for s in flat_player.final_states] == ["Done"]

    def test_player_transitions(self, flat_player):
        edges = {t.id: (t.source, t.target) for t in flat_player.transitions}
        assert edges == {
            "T1": ("Off", "Playing"),
            "T2": ("Playing", "Paused"),
            "T3": ("Paused", "Playing"),
            "T4.Paused": ("Paused", "Off"),
            "T4.Playing": ("Playing", "Off"),
            "T5": ("Off", "Done"),
        }

    def test_copies_keep_action(self, flat_player):
        assert flat_player.transition("T4.Playing").output == "halt"

    def test_flattened_chart_is_valid(self, flat_player):
        assert validate(flat_player) == []

    def test_nearer_handler_wins(self):
        sc = parse_statechart(
            "statechart C\nevents go stop\nstate Top initial\nstate A in Top entry\nstate B in Top\nstate End final\n"
            "transition t1: A -> B on go\ntransition t2: Top -> End on go\ntransition t3: Top -> End on stop\n"
        )
        flat = flatten(sc)
        assert sorted(t.id for t in flat.transitions) == ["t1", "t2.B", "t3.A", "t3.B"]

    def test_guarded_nearer_handler_masks_copy(self):
        sc = parse_statechart(
            "statechart C\nevents e\nvars x\nstate Top initial\nstate A in Top entry\nstate B in Top\nstate X final\n"
            "transition t1: A -> B on e [x > 0]\ntransition t2: Top -> X on e\ntransition t3: B -> X on e\n"
        )
        flat = flatten(sc)
        assert {t.id: t.guard for t in flat.transitions} == {"t1": "x > 0", "t2.A": "not (x > 0)", "t3": None}
        assert run(flat, "A", [InputEvent(event="e", bindings={"x": 0})]).states[-1] == "X"
        assert run(flat, "A", [InputEvent(event="e", bindings={"x": 1})]).states[-1] == "B"
        assert event_traces(flat, 4) == event_traces(sc, 4)

    def test_nested_transitions(self, nested):
        flat = flatten(nested)
        assert [s.id for s in flat.states] == ["Done", "Menu", "Off", "Paused", "Playing"]
        edges = {t.id: (t.source, t.target, t.guard) for t in flat.transitions}
        assert edges == {
            "N1": ("Off", "Playing", None),
            "N2": ("Playing", "Paused", None),
            "N3": ("Paused", "Playing", None),
            "N4.Paused": ("Paused", "Menu", None),
            "N5": ("Menu", "Playing", None),
            "N6": ("Playing", "Playing", "pos > 0"),
            "N7.Menu": ("Menu", "Off", None),
            "N7.Paused": ("Paused", "Off", None),
            "N7.Playing": ("Playing", "Off", "not (pos > 0)"),
            "N8.Menu": ("Menu", "Off", None),
            "N8.Paused": ("Paused", "Off", None),
            "N8.Playing": ("Playing", "Off", None),
            "N9": ("Off", "Done", None),
        }
        assert validate(nested) == []
        assert validate(flat) == []

    def test_nested_traces_preserved(self, nested):
        flat = flatten(nested)
        assert event_traces(flat, 6) == event_traces(nested, 6)

    def test_player_traces_preserved(self, hierarchical, flat_player):
        assert event_traces(flat_player, 6) == event_traces(hierarchical, 6)

    def test_flatten_is_idempotent(self, nested):
        flat = flatten(nested)
        assert flatten(flat) == flat

    def test_copy_id_collision(self):
        sc = parse_statechart(
            "statechart C\nevents e f\nstate Top initial\nstate A in Top entry\nstate B in Top\nstate X final\n"
            "transition t1: A -> B on f\ntransition t2: Top -> X on e\ntransition t2.B: B -> X on f\n"
        )
        assert codes(validate(sc)) == ["duplicate-transition(t2.B)"]
        with pytest.raises(SemanticError) as info:
            flatten(sc)
        assert info.value.code == "duplicate-transition"

    def test_orthogonal_regions_rejected(self):
        sc = Statechart(
            name="C",
            states=(
                State(id="Top", kind=StateKind.COMPOSITE, is_initial=True, is_final=True),
                State(id="A", parent="Top", is_entry=True),
                State(id="B", parent="Top", is_entry=True),
            ),
        )
        with pytest.raises(OrthogonalRegionUnsupported):
            flatten(sc)


@pytest.mark.unit
class TestInOutSets:
    def test_atm_sets(self, atm):
        assert [t.id for t in in_set(atm, "St6")] == ["TR5", "TR7"]
        assert [t.id for t in out_set(atm, "St5")] == ["TR5", "TR6"]
        assert in_set(atm, "St1") == ()
        assert out_set(atm, "St6") == ()

    def test_composite_state_rejected(self, hierarchical):
        with pytest.raises(UnknownState):
            out_set(hierarchical, "On")

    def test_unknown_state(self, atm):
        with pytest.raises(UnknownState):
            in_set(atm, "St99")


@pytest.mark.unit
class TestCheckTrace:
    def test_generated_suite_is_consistent(self, atm, atm_suite):
        check_suite(atm, atm_suite.cases)

    def test_broken_chain(self, atm):
        case = TestCase(id="bad", I="St1", states=("St1", "St3"), transitions=("TR1",))
        with pytest.raises(SuiteInconsistent) as info:
            check_trace(atm, case)
        assert "TR1" in str(info.value)

    def test_unknown_transition(self, atm):
        case = TestCase(id="bad", I="St1", states=("St1", "St2"), transitions=("TR99",))
        with pytest.raises(SuiteInconsistent):
            check_trace(atm, case)

    def test_unknown_event(self, atm):
        case = TestCase(id="bad", I="St1", inputs=[{"event": "e99"}], states=("St1",))
        with pytest.raises(SuiteInconsistent):
            check_trace(atm, case)

    def test_wrong_outputs(self, atm, atm_suite):
        case = atm_suite.get("tc1").model_copy(update={"expected_outputs": ("bogus",)})
        with pytest.raises(SuiteInconsistent) as info:
            check_trace(atm, case)
        assert "emitted" in info.value.reason

    def test_wrong_complete_flag(self, atm, atm_suite):
        case = atm_suite.get("tc5")
        assert case.complete
        with pytest.raises(SuiteInconsistent) as info:
            check_trace(atm, case.model_copy(update={"complete": False}))
        assert "complete" in info.value.reason

    def test_wrong_verdict(self, atm, atm_suite):
        case = atm_suite.get("tc1").model_copy(update={"expected_verdict": "rejected_at(1, no_enabled_transition)"})
        with pytest.raises(SuiteInconsistent):
            check_trace(atm, case)

    def test_inputs_must_replay(self, atm, atm_suite):
        case = atm_suite.get("tc1").model_copy(update={"inputs": ()})
        with pytest.raises(SuiteInconsistent):
            check_trace(atm, case)

    def test_generated_ftc_suite_is_consistent(self, atm):
        check_suite(atm, generate_ftc_suite(atm, pair_coverage=True, guard_probes=True).cases)
