"""Lifecycle profiles, critical stage, duration, disruption, and card dealing."""

import random

import pytest

from killplane import (
    Campaign,
    CkcPhase,
    DAY,
    HOUR,
    HkcStage,
    LifecycleProfile,
    MONTH,
    builtin_profiles,
    campaign_duration,
    check_profile,
    critical_stage,
    default_phingo_vocabulary,
    disruption_candidates,
    generate_phingo_cards,
    profile_by_label,
    response_window_check,
)
from killplane.errors import (
    EmptyCampaignError,
    InsufficientVocabularyError,
    NoHumanLayerError,
    UndatedCampaignError,
)

from conftest import at, make_event, random_campaign
from oracles import critical_stage_oracle, disruption_oracle


def campaign_of(*events, scam_type=None) -> Campaign:
    return Campaign(id="t", name="test", events=tuple(events), scam_type=scam_type)


class TestProfiles:
    def test_exactly_three(self):
        assert len(builtin_profiles()) == 3

    def test_tech_support_row(self):
        p = profile_by_label("Tech support")
        assert p == LifecycleProfile(
            "Tech support", 0, 48 * HOUR, HkcStage.EMOTIONAL_TRIGGERING
        )

    def test_bec_row(self):
        p = profile_by_label("Business email compromise")
        assert p == LifecycleProfile(
            "Business email compromise", 2 * DAY, 14 * DAY, HkcStage.TRUST_ESTABLISHMENT
        )

    def test_romance_row(self):
        p = profile_by_label("Romance scam")
        assert p == LifecycleProfile(
            "Romance scam", 3 * MONTH, 18 * MONTH, HkcStage.SUSTAINED_ENGAGEMENT
        )

    def test_unknown_label(self):
        assert profile_by_label("Crypto rug pull") is None

    def test_bounds_ordered(self):
        with pytest.raises(ValueError):
            LifecycleProfile("bad", 10, 5, HkcStage.TRUST_ESTABLISHMENT)


class TestCriticalStage:
    def test_single_stage_dwell(self):
        c = campaign_of(
            make_event("a", 1, CkcPhase.COMMAND_AND_CONTROL,
                       HkcStage.SUSTAINED_ENGAGEMENT, duration=100)
        )
        assert critical_stage(c) is HkcStage.SUSTAINED_ENGAGEMENT

    def test_max_dwell_wins(self):
        c = campaign_of(
            make_event("a", 1, CkcPhase.DELIVERY,
                       HkcStage.TRUST_ESTABLISHMENT, duration=10 * DAY),
            make_event("b", 2, CkcPhase.EXPLOITATION,
                       HkcStage.EMOTIONAL_TRIGGERING, duration=2 * HOUR),
        )
        assert critical_stage(c) is HkcStage.TRUST_ESTABLISHMENT

    def test_tie_breaks_to_lower_ordinal(self):
        c = campaign_of(
            make_event("a", 1, CkcPhase.EXPLOITATION,
                       HkcStage.EMOTIONAL_TRIGGERING, duration=500),
            make_event("b", 2, CkcPhase.DELIVERY,
                       HkcStage.TRUST_ESTABLISHMENT, duration=500),
        )
        assert critical_stage(c) is HkcStage.TRUST_ESTABLISHMENT

    def test_durationless_events_count_one_second(self):
        c = campaign_of(
            make_event("a", 1, CkcPhase.DELIVERY, HkcStage.TRUST_ESTABLISHMENT),
            make_event("b", 2, CkcPhase.DELIVERY, HkcStage.TRUST_ESTABLISHMENT),
            make_event("c", 3, CkcPhase.EXPLOITATION, HkcStage.EMOTIONAL_TRIGGERING),
        )
        assert critical_stage(c) is HkcStage.TRUST_ESTABLISHMENT

    def test_zero_click_only_is_an_error(self):
        c = campaign_of(make_event("a", 1), make_event("b", 2))
        with pytest.raises(NoHumanLayerError):
            critical_stage(c)

    def test_matches_oracle_on_random_campaigns(self):
        rng = random.Random(19)
        for _ in range(200):
            campaign = random_campaign(rng, max_events=50)
            expected = critical_stage_oracle(campaign)
            if expected is None:
                with pytest.raises(NoHumanLayerError):
                    critical_stage(campaign)
            else:
                assert critical_stage(campaign) is expected


class TestDuration:
    def test_single_instantaneous_event(self):
        c = campaign_of(make_event("a", 1, timestamp=at(0)))
        assert campaign_duration(c) == 0

    def test_two_timestamps(self):
        c = campaign_of(
            make_event("a", 1, timestamp=at(0)),
            make_event("b", 2, timestamp=at(3600)),
        )
        assert campaign_duration(c) == 3600

    def test_last_duration_extends_the_end(self):
        c = campaign_of(
            make_event("a", 1, timestamp=at(0), duration=100),
            make_event("b", 2, timestamp=at(50), duration=200),
        )
        assert campaign_duration(c) == 250

    def test_undated_campaign_is_an_error(self):
        with pytest.raises(UndatedCampaignError):
            campaign_duration(campaign_of(make_event("a", 1)))

    def test_undated_events_are_ignored(self):
        c = campaign_of(
            make_event("a", 1, timestamp=at(10)),
            make_event("b", 2),
            make_event("c", 3, timestamp=at(100)),
        )
        assert campaign_duration(c) == 90


class TestCheckProfile:
    def test_romance_fixture_conforms(self, romance_scam):
        report = check_profile(romance_scam, profile_by_label("Romance scam"))
        assert report.duration_in_bounds
        assert report.critical_stage_matches
        assert report.conforms

    def test_bec_fixture_conforms(self, bec):
        report = check_profile(bec, profile_by_label("Business email compromise"))
        assert report.conforms

    def test_tech_support_fixture_conforms(self, tech_support):
        report = check_profile(tech_support, profile_by_label("Tech support"))
        assert report.conforms

    def test_out_of_bounds_duration(self):
        c = campaign_of(
            make_event("a", 1, CkcPhase.DELIVERY, HkcStage.TRUST_ESTABLISHMENT,
                       timestamp=at(0)),
            make_event("b", 2, CkcPhase.ACTIONS_ON_OBJECTIVES,
                       HkcStage.ACTION_MANIPULATION, timestamp=at(30 * DAY)),
        )
        report = check_profile(c, profile_by_label("Business email compromise"))
        assert not report.duration_in_bounds
        assert report.measured_duration == 30 * DAY

    def test_undated_campaign_propagates(self):
        with pytest.raises(UndatedCampaignError):
            check_profile(campaign_of(), profile_by_label("Tech support"))


class TestDisruption:
    def test_single_cell_scores_one(self):
        c = campaign_of(
            make_event("a", 1, CkcPhase.DELIVERY, HkcStage.TRUST_ESTABLISHMENT)
        )
        candidates = disruption_candidates(c, 5)
        assert len(candidates) == 1
        assert candidates[0].score == 1.0

    def test_ransomware_top_candidate(self, ransomware):
        top = disruption_candidates(ransomware, 1)[0]
        assert top.coordinate.ckc is CkcPhase.ACTIONS_ON_OBJECTIVES
        assert top.coordinate.human is HkcStage.EMOTIONAL_TRIGGERING

    def test_k_caps_at_occupied_cells(self, ransomware):
        candidates = disruption_candidates(ransomware, 50)
        assert len(candidates) == 4

    def test_zero_click_weight_discounts(self):
        c = campaign_of(
            make_event("a", 1, CkcPhase.EXPLOITATION, duration=100),
            make_event("b", 2, CkcPhase.DELIVERY, HkcStage.TRUST_ESTABLISHMENT,
                       duration=100),
        )
        ranked = disruption_candidates(c, 2, zero_click_weight=0.25)
        assert not ranked[0].coordinate.is_zero_click
        assert ranked[1].score == pytest.approx(ranked[0].score * 0.25)

    def test_scores_sum_to_one_with_unit_weight(self):
        rng = random.Random(23)
        for _ in range(30):
            campaign = random_campaign(rng, max_events=30)
            if not campaign.events:
                continue
            ranked = disruption_candidates(campaign, 63, zero_click_weight=1.0)
            assert sum(c.score for c in ranked) == pytest.approx(1.0)

    def test_empty_campaign_is_an_error(self):
        with pytest.raises(EmptyCampaignError):
            disruption_candidates(campaign_of(), 3)

    def test_rejects_bad_parameters(self, ransomware):
        with pytest.raises(ValueError):
            disruption_candidates(ransomware, 0)
        with pytest.raises(ValueError):
            disruption_candidates(ransomware, 3, zero_click_weight=1.5)

    def test_matches_oracle_on_random_campaigns(self):
        rng = random.Random(29)
        for _ in range(200):
            campaign = random_campaign(rng, max_events=50)
            if not campaign.events:
                continue
            got = disruption_candidates(campaign, 10, zero_click_weight=0.25)
            expected = disruption_oracle(campaign, 10, 0.25)
            assert [(c.coordinate, c.score) for c in got] == expected

    def test_deterministic_for_identical_campaigns(self, ransomware):
        a = disruption_candidates(ransomware, 4)
        b = disruption_candidates(ransomware, 4)
        assert a == b


class TestResponseWindow:
    def test_tech_support_one_hour_is_at_risk(self, ransomware):
        result = response_window_check(
            ransomware, profile_by_label("Tech support"), HOUR
        )
        assert not result.ok
        assert result.margin == HOUR

    def test_bec_one_day_is_ok(self, ransomware):
        result = response_window_check(
            ransomware, profile_by_label("Business email compromise"), DAY
        )
        assert result.ok
        assert result.margin == 0

    def test_zero_response_always_ok(self):
        for profile in builtin_profiles():
            assert response_window_check(campaign_of(), profile, 0).ok

    def test_monotone_in_response_time(self):
        profile = profile_by_label("Business email compromise")
        previous_ok = True
        for response in range(0, 5 * DAY, 6 * HOUR):
            ok = response_window_check(campaign_of(), profile, response).ok
            assert previous_ok or not ok  # once at risk, never ok again
            previous_ok = ok

    def test_policy_multiplier_scales_deadline(self):
        profile = profile_by_label("Business email compromise")
        strict = response_window_check(campaign_of(), profile, 3 * DAY,
                                       policy_multiplier=0.5)
        assert not strict.ok
        assert strict.deadline == DAY

    def test_negative_response_rejected(self):
        with pytest.raises(ValueError):
            response_window_check(campaign_of(), builtin_profiles()[0], -1)


class TestPhingo:
    def test_exact_vocabulary_makes_permutations(self):
        vocabulary = [f"tactic {i}" for i in range(25)]
        cards = generate_phingo_cards(vocabulary, 4, seed=1)
        for card in cards:
            assert sorted(card.labels) == sorted(vocabulary)

    def test_deterministic_for_fixed_seed(self):
        vocabulary = default_phingo_vocabulary()
        assert generate_phingo_cards(vocabulary, 5, 42) == generate_phingo_cards(
            vocabulary, 5, 42
        )

    def test_different_seeds_differ(self):
        vocabulary = default_phingo_vocabulary()
        assert generate_phingo_cards(vocabulary, 1, 1) != generate_phingo_cards(
            vocabulary, 1, 2
        )

    def test_every_card_has_25_distinct_labels(self):
        vocabulary = [f"label {i}" for i in range(30)]
        for card in generate_phingo_cards(vocabulary, 100, seed=7):
            assert len(card.labels) == 25
            assert len(set(card.labels)) == 25
            assert set(card.labels) <= set(vocabulary)

    def test_vocabulary_deduplicated_before_counting(self):
        vocabulary = ["x"] * 10 + [f"t{i}" for i in range(23)]  # 24 distinct
        with pytest.raises(InsufficientVocabularyError):
            generate_phingo_cards(vocabulary, 1, 0)
        assert generate_phingo_cards(vocabulary + ["t23"], 1, 0)  # 25 distinct

    def test_small_vocabulary_rejected(self):
        with pytest.raises(InsufficientVocabularyError):
            generate_phingo_cards([f"t{i}" for i in range(24)], 1, 0)

    def test_rows_are_five_by_five(self):
        card = generate_phingo_cards(default_phingo_vocabulary(), 1, 3)[0]
        rows = card.rows()
        assert len(rows) == 5
        assert all(len(row) == 5 for row in rows)

    def test_default_vocabulary_is_large_enough(self):
        vocabulary = default_phingo_vocabulary()
        assert len(vocabulary) >= 25
        assert len(set(vocabulary)) == len(vocabulary)
