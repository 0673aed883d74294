import numpy as np
import pytest

from aertools.emotion import Emotion
from aertools.errors import InsufficientDataError, ParameterError, ShapeError
from aertools.pipeline import (
    DEFAULT_ORDER,
    Direction,
    FeatureVector,
    ScreeningStage,
    apply_cascade,
    fit_cascade,
    parse_stage_order,
)
from aertools.pipeline.cascade import format_stage_order


def vec(teo=0.0, le=0.0, layout_version=1):
    return FeatureVector(
        fd_features=np.ones(3),
        screen_features=[le, 0.0, teo, 0.0, 0.0, 0.0],
        levels=1,
        layout_version=layout_version,
    )


ANGRY_ONLY = "angry:teo_mean:greater"


class TestFit:
    def test_midpoint_threshold(self):
        # GIVEN angry utterances with mean TEO 10 and others with mean 2
        pairs = [
            (vec(teo=9), Emotion.angry),
            (vec(teo=11), Emotion.angry),
            (vec(teo=1), Emotion.sad),
            (vec(teo=3), Emotion.fear),
        ]
        # WHEN a single stage is fitted
        (stage,) = fit_cascade(pairs, ANGRY_ONLY).stages
        # THEN its threshold is the midpoint and its margin half the gap
        assert stage.target is Emotion.angry
        assert stage.threshold == pytest.approx(6.0)
        assert stage.margin == pytest.approx(4.0)

    def test_identical_means_never_fire(self):
        pairs = [(vec(teo=2), Emotion.angry)] * 2 + [(vec(teo=2), Emotion.sad)] * 2
        (stage,) = fit_cascade(pairs, ANGRY_ONLY).stages
        assert stage.margin == 0.0
        assert not stage.fires(100.0)

    def test_wrong_side_disables_stage(self, caplog):
        # GIVEN angry utterances quieter than the rest in TEO
        pairs = [(vec(teo=1), Emotion.angry)] * 2 + [(vec(teo=5), Emotion.sad)] * 2
        # WHEN a 'greater' stage is fitted
        (stage,) = fit_cascade(pairs, ANGRY_ONLY).stages
        # THEN it is kept but disabled
        assert stage.margin == 0.0
        assert any("wrong side" in r.message for r in caplog.records)

    def test_separated_gaussians(self):
        # GIVEN angry TEO ~ N(8, 1) and the rest ~ N(2, 1)
        rng = np.random.default_rng(4)
        pairs = [(vec(teo=t), Emotion.angry) for t in rng.normal(8, 1, 200)]
        pairs += [(vec(teo=t), Emotion.happy) for t in rng.normal(2, 1, 200)]
        cascade = fit_cascade(pairs, ANGRY_ONLY)
        # THEN the stage captures nearly all angry utterances
        captured = [apply_cascade(cascade, v) for v, e in pairs if e is Emotion.angry]
        assert captured.count(Emotion.angry) >= 190

    def test_later_stages_see_survivors_only(self):
        # GIVEN loud angry, quiet sad and ordinary fear utterances
        pairs = (
            [(vec(teo=10, le=0), Emotion.angry)] * 3
            + [(vec(teo=1, le=-20), Emotion.sad)] * 3
            + [(vec(teo=1, le=-2), Emotion.fear)] * 3
        )
        # WHEN the angry and sad stages are fitted in turn
        cascade = fit_cascade(pairs, "angry:teo_mean:greater,sad:le_mean:less")
        # THEN the sad threshold ignores the captured angry utterances
        assert cascade.stages[1].threshold == pytest.approx(-11.0)
        assert apply_cascade(cascade, vec(teo=10)) is Emotion.angry
        assert apply_cascade(cascade, vec(teo=1, le=-15)) is Emotion.sad
        assert apply_cascade(cascade, vec(teo=1, le=-1)) is None

    def test_insufficient_targets(self):
        pairs = [(vec(teo=9), Emotion.angry)] + [(vec(teo=1), Emotion.sad)] * 3
        with pytest.raises(InsufficientDataError):
            fit_cascade(pairs, ANGRY_ONLY)


class TestStage:
    def test_tie_does_not_fire(self):
        stage = ScreeningStage(Emotion.angry, 2, Direction.greater, 6.0, 4.0)
        assert not stage.fires(6.0)
        assert stage.fires(6.0001)

    def test_less_direction(self):
        stage = ScreeningStage(Emotion.sad, 0, Direction.less, -5.0, 1.0)
        assert stage.fires(-6.0)
        assert not stage.fires(-5.0)

    def test_invalid_stage(self):
        with pytest.raises(ShapeError):
            ScreeningStage(Emotion.sad, 6, Direction.less, 0.0, 1.0)
        with pytest.raises(ParameterError):
            ScreeningStage(Emotion.sad, 0, Direction.less, 0.0, -1.0)


class TestStageOrder:
    def test_default_order(self):
        order = parse_stage_order(DEFAULT_ORDER)
        assert [s[0] for s in order] == [Emotion.angry, Emotion.sad, Emotion.disgust]
        assert format_stage_order(order) == DEFAULT_ORDER

    def test_feature_by_index(self):
        assert parse_stage_order("fear:2:greater") == [
            (Emotion.fear, 2, Direction.greater)
        ]

    @pytest.mark.parametrize(
        "text",
        [
            "angry:teo_mean",
            "calm:teo_mean:greater",
            "angry:loudness:greater",
            "angry:9:greater",
            "angry:teo_mean:up",
            "angry:teo_mean:greater,angry:le_mean:less",
        ],
    )
    def test_invalid_order(self, text):
        with pytest.raises(ParameterError):
            parse_stage_order(text)


def test_layout_mismatch():
    pairs = [(vec(teo=9), Emotion.angry)] * 2 + [(vec(teo=1), Emotion.sad)] * 2
    cascade = fit_cascade(pairs, ANGRY_ONLY)
    with pytest.raises(ShapeError):
        apply_cascade(cascade, vec(teo=9, layout_version=2))
