"""Learner correctness: gradients, metrics, training, what-if analysis."""

import dataclasses
import json

import numpy as np
import pytest

import oracles
from vren.court import PassRating, SetLocation
from vren.diagnostics import (
    BadIndexError,
    DegenerateLabelsError,
    DimMismatchError,
    InvalidModelError,
    InvalidPerturbationError,
    LengthMismatchError,
)
from vren.features import LAYOUT, FeatureMatrix, TaskKind, build_dataset
from vren.learn import (
    EvalReport,
    TrainConfig,
    auc_score,
    binary_loss_and_grad,
    evaluate_binary,
    evaluate_categorical,
    load_model,
    multiclass_loss_and_grad,
    per_round_win_prob,
    perturb_rally,
    predict_proba,
    save_model,
    split_matches,
    train_binary,
    train_multiclass,
    what_if,
)
from vren.model import HitType, Team


def matrix(X, y, task=None, k=0):
    X = np.asarray(X, dtype=float)
    return FeatureMatrix(
        X=X, y=np.asarray(y, dtype=np.int64),
        groups=tuple(f"m{i}" for i in range(len(X))), task=task, k=k,
    )


# ---------------------------------------------------------------------------
# gradients against central finite differences

@pytest.mark.parametrize("seed", range(10))
def test_binary_gradient_matches_finite_differences(seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    n, f = rng.integers(3, 12), rng.integers(2, 9)
    X = rng.standard_normal((n, f))
    y = rng.integers(0, 2, n).astype(float)
    w = rng.standard_normal(f)
    b = float(rng.standard_normal())
    l2 = float(rng.uniform(0, 0.3))

    _, grad_w, grad_b = binary_loss_and_grad(w, b, X, y, l2)
    num_w = oracles.central_difference(lambda v: binary_loss_and_grad(v, b, X, y, l2)[0], w)
    num_b = oracles.central_difference(
        lambda v: binary_loss_and_grad(w, float(v[0]), X, y, l2)[0], np.array([b])
    )
    assert oracles.max_relative_error(grad_w, num_w) < 1e-6
    assert oracles.max_relative_error([grad_b], num_b) < 1e-6


@pytest.mark.parametrize("seed", range(10))
def test_multiclass_gradient_matches_finite_differences(seed):
    rng = np.random.Generator(np.random.PCG64(100 + seed))
    n, f, c = rng.integers(3, 12), rng.integers(2, 7), rng.integers(2, 6)
    X = rng.standard_normal((n, f))
    y = rng.integers(0, c, n)
    W = rng.standard_normal((c, f))
    b = rng.standard_normal(c)
    l2 = float(rng.uniform(0, 0.3))

    _, grad_W, grad_b = multiclass_loss_and_grad(W, b, X, y, l2)
    num_W = oracles.central_difference(lambda v: multiclass_loss_and_grad(v, b, X, y, l2)[0], W)
    num_b = oracles.central_difference(lambda v: multiclass_loss_and_grad(W, v, X, y, l2)[0], b)
    assert oracles.max_relative_error(grad_W, num_W) < 1e-6
    assert oracles.max_relative_error(grad_b, num_b) < 1e-6


def test_losses_are_finite_at_extreme_logits():
    X = np.array([[1000.0], [-1000.0]])
    y = np.array([0.0, 1.0])
    loss, grad_w, grad_b = binary_loss_and_grad(np.array([1.0]), 0.0, X, y, 0.0)
    assert np.isfinite(loss) and np.isfinite(grad_w).all() and np.isfinite(grad_b)
    loss2, gW, gb = multiclass_loss_and_grad(
        np.array([[1000.0], [-1000.0]]), np.zeros(2), X, np.array([0, 1]), 0.0
    )
    assert np.isfinite(loss2) and np.isfinite(gW).all() and np.isfinite(gb).all()


# ---------------------------------------------------------------------------
# AUC and evaluation metrics

@pytest.mark.parametrize("seed", range(8))
def test_auc_matches_pairwise_oracle(seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    n = int(rng.integers(2, 60))
    # quantized probabilities force plenty of ties
    probs = rng.integers(0, 5, n) / 4.0
    labels = rng.integers(0, 2, n)
    want = oracles.pairwise_auc(probs, labels)
    got = auc_score(probs, labels)
    if want is None:
        assert got is None
    else:
        assert got == pytest.approx(want, abs=1e-12)


def test_auc_edges():
    assert auc_score(np.array([0.9, 0.8, 0.1]), np.array([1, 1, 0])) == 1.0
    assert auc_score(np.array([0.1, 0.2, 0.9]), np.array([1, 1, 0])) == 0.0
    assert auc_score(np.array([0.5, 0.5]), np.array([1, 0])) == 0.5
    assert auc_score(np.array([0.5, 0.5]), np.array([1, 1])) is None


def test_evaluate_binary_hand_check():
    report = evaluate_binary([0.9, 0.5, 0.2, 0.4], [1, 0, 0, 1])
    # 0.5 ties toward class 1, so predictions are 1,1,0,0 -> accuracy 50%
    assert report.binary_accuracy == pytest.approx(50.0)
    assert report.brier == pytest.approx(np.mean([0.01, 0.25, 0.04, 0.36]))
    assert report.mae == pytest.approx(np.mean([0.1, 0.5, 0.2, 0.6]))
    assert report.n_examples == 4
    assert report.auc == pytest.approx(oracles.pairwise_auc([0.9, 0.5, 0.2, 0.4], [1, 0, 0, 1]))


def test_evaluate_binary_validation():
    with pytest.raises(LengthMismatchError):
        evaluate_binary([0.5], [1, 0])
    with pytest.raises(LengthMismatchError):
        evaluate_binary([], [])
    with pytest.raises(ValueError):
        evaluate_binary([1.5], [1])
    with pytest.raises(ValueError):
        evaluate_binary([0.5], [2])


def test_evaluate_categorical_hand_check():
    dists = [[0.5, 0.5, 0.0], [0.1, 0.8, 0.1], [0.2, 0.3, 0.5]]
    # first row ties between classes 0 and 1: argmax picks the lowest index
    report = evaluate_categorical(dists, [0, 1, 0])
    assert report.categorical_accuracy == pytest.approx(200 / 3)
    with pytest.raises(ValueError):
        evaluate_categorical([[0.9, 0.0]], [0])
    with pytest.raises(LengthMismatchError):
        evaluate_categorical([[1.0]], [0, 0])


def test_eval_report_json_shape():
    doc = EvalReport(n_examples=3, binary_accuracy=50.0).to_json()
    assert doc["n_examples"] == 3 and doc["categorical_accuracy"] is None


# ---------------------------------------------------------------------------
# training behaviour

def separable_binary(n=60, f=5, seed=0):
    rng = np.random.Generator(np.random.PCG64(seed))
    X = rng.standard_normal((n, f))
    y = (X[:, 0] > 0).astype(int)
    X[:, 0] += np.where(y == 1, 2.0, -2.0)
    return matrix(X, y)


def test_binary_training_reaches_separable_accuracy():
    fm = separable_binary()
    model = train_binary(fm, TrainConfig(epochs=400, l2=0.0))
    probs = predict_proba(model, fm.X)
    report = evaluate_binary(probs, fm.y)
    assert report.binary_accuracy >= 99.0
    assert report.auc == 1.0


def test_loss_history_monotone_nonincreasing():
    fm = separable_binary(seed=3)
    model = train_binary(fm, TrainConfig(epochs=150))
    diffs = np.diff(model.loss_history)
    assert len(model.loss_history) == 150
    assert (diffs <= 1e-12).all()


def test_multiclass_training_separable():
    rng = np.random.Generator(np.random.PCG64(4))
    centers = np.array([[4.0, 0.0], [-4.0, 0.0], [0.0, 4.0]])
    X = np.vstack([rng.standard_normal((30, 2)) * 0.3 + c for c in centers])
    y = np.repeat([0, 1, 2], 30)
    model = train_multiclass(matrix(X, y), TrainConfig(epochs=400))
    dists = predict_proba(model, X)
    assert evaluate_categorical(dists, y).categorical_accuracy == 100.0
    assert dists.shape == (90, 3)
    assert np.allclose(dists.sum(axis=1), 1.0)


def test_degenerate_labels_rejected():
    with pytest.raises(DegenerateLabelsError):
        train_binary(matrix(np.zeros((3, 2)), [1, 1, 1]))
    with pytest.raises(DegenerateLabelsError):
        train_binary(matrix(np.zeros((3, 2)), [0, 1, 2]))
    with pytest.raises(DegenerateLabelsError):
        train_multiclass(matrix(np.zeros((3, 2)), [1, 1, 1]))


def test_l2_shrinks_weights():
    fm = separable_binary(seed=5)
    loose = train_binary(fm, TrainConfig(epochs=200, l2=0.0))
    tight = train_binary(fm, TrainConfig(epochs=200, l2=1.0))
    assert np.linalg.norm(tight.weights) < np.linalg.norm(loose.weights)


def test_seeded_init_is_reproducible():
    fm = separable_binary(seed=6)
    cfg = TrainConfig(epochs=5, init_scale=0.01, seed=42)
    a = train_binary(fm, cfg)
    b = train_binary(fm, cfg)
    assert (a.weights == b.weights).all()
    assert a.loss_history == b.loss_history


def test_predict_proba_dim_mismatch():
    model = train_binary(separable_binary(), TrainConfig(epochs=5))
    with pytest.raises(DimMismatchError):
        predict_proba(model, np.zeros(3))


def test_predict_proba_vector_vs_matrix():
    fm = separable_binary(seed=7)
    model = train_binary(fm, TrainConfig(epochs=50))
    single = predict_proba(model, fm.X[0])
    batch = predict_proba(model, fm.X[:3])
    assert isinstance(single, float)
    assert batch.shape == (3,)
    assert batch[0] == pytest.approx(single)


# ---------------------------------------------------------------------------
# splitting

def test_split_matches_partition(synth_corpus):
    train, val, test = split_matches(synth_corpus, seed=11)
    ids = lambda ms: [m.match_id for m in ms]
    assert len(val) == max(1, round(0.07 * len(synth_corpus)))
    assert len(test) == max(1, round(0.13 * len(synth_corpus)))
    assert len(train) + len(val) + len(test) == len(synth_corpus)
    assert set(ids(train)) | set(ids(val)) | set(ids(test)) == set(ids(synth_corpus))
    assert not set(ids(train)) & set(ids(test))
    # deterministic
    again = split_matches(synth_corpus, seed=11)
    assert ids(again[0]) == ids(train) and ids(again[2]) == ids(test)
    # different seed reshuffles eventually
    assert any(ids(split_matches(synth_corpus, seed=s)[2]) != ids(test) for s in range(5))


def test_split_needs_three_matches(synth_corpus):
    with pytest.raises(ValueError):
        split_matches(synth_corpus[:2])


# ---------------------------------------------------------------------------
# per-round probabilities and what-if

def test_per_round_prob_lengths(winner_model, synth_corpus):
    for match in synth_corpus[:4]:
        context = []
        for rally in match.rallies:
            probs = per_round_win_prob(winner_model, rally, tuple(context))
            assert len(probs) == len(rally.rounds)
            assert all(0.0 <= p <= 1.0 for p in probs)
            context.extend(rally.rounds)


def test_per_round_prob_requires_binary(synth_corpus):
    fm = build_dataset(synth_corpus[:4], TaskKind.SET_TYPE, k=1)
    multi = train_multiclass(fm, TrainConfig(epochs=3))
    with pytest.raises(InvalidModelError):
        per_round_win_prob(multi, synth_corpus[0].rallies[0])


def test_context_changes_windows(winner_model, golden_match):
    rally2 = golden_match.rallies[1]
    with_context = per_round_win_prob(winner_model, rally2, golden_match.rallies[0].rounds)
    without = per_round_win_prob(winner_model, rally2)
    assert with_context != without


def test_what_if_identity_delta_zero(winner_model, golden_match):
    rally = golden_match.rallies[7]
    rnd = rally.rounds[1]
    result = what_if(winner_model, rally, 1, "set_location", rnd.set_location)
    assert result.delta == 0.0
    assert result.p_before == result.p_after
    assert result.probs_before == result.probs_after


def test_what_if_dball_to_quick_direction(winner_model, golden_match):
    rally = golden_match.rallies[7]  # rally 8: round 2 is an in-system d_ball
    result = what_if(winner_model, rally, 1, "set_location", SetLocation.QUICK)
    assert result.changed_field == "set_location"
    assert result.old_value is SetLocation.D_BALL
    assert result.new_value is SetLocation.QUICK
    assert result.delta == result.p_after - result.p_before
    doc = result.to_json()
    assert doc["old_value"] == "d_ball" and doc["new_value"] == "quick"
    json.dumps(doc)


def test_what_if_out_of_window_round_changes_nothing(winner_model, golden_match):
    """A perturbed round that windowing has pushed out has exactly zero effect."""
    k = winner_model.k
    rally = golden_match.rallies[0]
    # pile enough context rounds after nothing: perturb round 0 but read the
    # final round of a long synthetic rally instead
    rounds = list(rally.rounds)
    team = rounds[-1].team
    while len(rounds) < k + 2:
        team = team.other
        rounds.append(dataclasses.replace(rounds[-1], round_no=len(rounds) + 1, team=team,
                                          serve_type=None, serve_from=None))
    long_rally = dataclasses.replace(rally, rounds=tuple(rounds))
    result = what_if(winner_model, long_rally, 0, "target", 9)
    assert result.delta == 0.0
    assert result.probs_before[-1] == result.probs_after[-1]
    # but the early probabilities (while the round was in the window) move
    assert result.probs_before[0] != result.probs_after[0]


def test_perturb_rally_validation(golden_match):
    rally = golden_match.rallies[0]
    with pytest.raises(BadIndexError):
        perturb_rally(rally, 5, "target", 3)
    with pytest.raises(InvalidPerturbationError):
        perturb_rally(rally, 0, "round_no", 4)
    with pytest.raises(InvalidPerturbationError):
        perturb_rally(rally, 0, "target", 99)
    # making round 2 repeat team A fails the alternation lint
    with pytest.raises(InvalidPerturbationError):
        perturb_rally(rally, 1, "team", Team.A)


def test_perturb_pass_to_rerates_pass(golden_match):
    rally = golden_match.rallies[0]  # round 1 has pass_to=11 (in system)
    perturbed = perturb_rally(rally, 0, "pass_to", 7)
    assert perturbed.rounds[0].pass_to == 7
    assert perturbed.rounds[0].pass_rating is PassRating.OUT_OF_SYSTEM
    back = perturb_rally(perturbed, 0, "pass_to", 12)
    assert back.rounds[0].pass_rating is PassRating.IN_SYSTEM


def test_perturb_keeps_other_rounds(golden_match):
    rally = golden_match.rallies[2]
    perturbed = perturb_rally(rally, 0, "hit_type", HitType.TIP)
    assert perturbed.rounds[1] == rally.rounds[1]
    assert perturbed.rounds[0].hit_type is HitType.TIP
    assert rally.rounds[0].hit_type is HitType.HIT  # original untouched


# ---------------------------------------------------------------------------
# model files

def test_save_load_round_trip(tmp_path, winner_model, synth_corpus):
    path = tmp_path / "model.json"
    save_model(winner_model, str(path))
    loaded = load_model(str(path))
    assert loaded.kind == "binary"
    assert loaded.k == winner_model.k
    assert loaded.task is TaskKind.RALLY_WINNER
    assert loaded.classes == ("team_b_wins", "team_a_wins")
    fm = build_dataset(synth_corpus[:2], TaskKind.RALLY_WINNER, k=winner_model.k)
    assert (predict_proba(loaded, fm.X) == predict_proba(winner_model, fm.X)).all()


def test_load_rejects_foreign_layout(tmp_path, winner_model):
    path = tmp_path / "model.json"
    save_model(winner_model, str(path))
    doc = json.loads(path.read_text())
    doc["layout_hash"] = "0000000000000000"
    path.write_text(json.dumps(doc))
    with pytest.raises(InvalidModelError):
        load_model(str(path))


def test_load_rejects_bad_format_and_shapes(tmp_path, winner_model):
    path = tmp_path / "model.json"
    save_model(winner_model, str(path))
    doc = json.loads(path.read_text())

    broken = dict(doc, format=99)
    path.write_text(json.dumps(broken))
    with pytest.raises(InvalidModelError):
        load_model(str(path))

    broken = dict(doc, kind="quantum")
    path.write_text(json.dumps(broken))
    with pytest.raises(InvalidModelError):
        load_model(str(path))

    broken = dict(doc, weights=[doc["weights"]])  # binary weights must stay 1-D
    path.write_text(json.dumps(broken))
    with pytest.raises(InvalidModelError):
        load_model(str(path))


def test_layout_hash_recorded(winner_model):
    assert winner_model.layout_hash == LAYOUT.layout_hash()
