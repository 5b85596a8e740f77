import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn.naive_bayes import MultinomialNB

from kpbench.candidates import CandidateSet, group_occurrences, select_ngrams, select_noun_adj_sequences
from kpbench.corpus import DfTable, ReferenceSet, compute_df
from kpbench.rankers import (NbModel, RankedItem, RankedList, build_training_rows, cluster_topics,
                             kpminer_boost, load_model, nb_score, nb_train, rank_kea, rank_kpminer, rank_tfidf,
                             rank_topicrank, rank_topics, rank_wingnus, redundancy_filter, save_model)
from kpbench.rankers.topicrank import topic_graph

import oracle
from conftest import make_doc, tagged


def cset(*phrases, doc_id="d"):
    """Candidate set from (position, 'w/T w/T') pairs."""
    occs = [(pos, tagged(text)) for pos, text in phrases]
    n = max(p + len(t) for p, t in occs) + 1
    return group_occurrences(doc_id, n, occs)


def rl(*stems):
    return RankedList("d", tuple(RankedItem(s, s, float(len(stems) - i)) for i, s in enumerate(stems)))


# -- tf x idf --------------------------------------------------------------------

def test_tfidf_closed_form():
    cs = cset((0, "grid/NN"), (5, "grid/NN"))
    ranked = rank_tfidf(cs, DfTable(9, {}))
    assert ranked.items[0].score == pytest.approx(2 * math.log2(10), abs=1e-12)
    assert ranked.items[0].score == pytest.approx(6.6439, abs=1e-4)


def test_tfidf_tie_broken_by_first_position():
    cs = cset((9, "nodes/NNS"), (5, "grid/NN"))
    assert rank_tfidf(cs, DfTable(9, {})).stems() == ["grid", "node"]


def test_tie_break_then_length_then_stem():
    cs = cset((3, "zeta/NN"), (3, "alpha/NN beta/NN"), (7, "beta/NN"), (7, "alpha/NN"))
    # zeta and "alpha beta" share position 3: shorter first
    assert rank_tfidf(cs, DfTable(1, {})).stems() == ["zeta", "alpha beta", "alpha", "beta"]


def test_tfidf_matches_recomputation(corpus):
    df = compute_df(corpus[:3])
    n_docs, odf = oracle.df_table(corpus[:3])
    for doc in corpus:
        got = [(it.stem, it.score) for it in rank_tfidf(select_ngrams(doc), df).items]
        c = oracle.cands_ngrams(doc)
        want = oracle.sort_items([(s, e, e["tf"] * oracle.idf(n_docs, odf, s)) for s, e in c.items()])
        assert [s for s, _ in got] == [s for s, _, _ in want]
        assert [v for _, v in got] == pytest.approx([v for _, _, v in want], abs=1e-12)


# -- naive Bayes -----------------------------------------------------------------

def test_nb_two_row_closed_form():
    m = nb_train([((1.0, 0.0), True), ((0.0, 1.0), False)])
    assert m.feature_log_prob[1] == pytest.approx((math.log(2 / 3), math.log(1 / 3)), abs=1e-12)
    assert m.feature_log_prob[0] == pytest.approx((math.log(1 / 3), math.log(2 / 3)), abs=1e-12)
    assert m.log_prior == pytest.approx((math.log(0.5), math.log(0.5)))


def test_nb_degenerate():
    with pytest.raises(ValueError, match="degenerate training set"):
        nb_train([((1.0,), True), ((2.0,), True)])
    with pytest.raises(ValueError):
        nb_train([((-1.0,), True), ((2.0,), False)])


def test_nb_random_rows_match_closed_form_and_sklearn():
    rng = np.random.default_rng(7)
    X = rng.uniform(0, 5, size=(20, 3))
    y = rng.integers(0, 2, size=20).astype(bool)
    y[0], y[1] = True, False
    rows = [(tuple(x), bool(l)) for x, l in zip(X, y)]
    m = nb_train(rows)
    ref = oracle.nb_fit(rows)
    for c in (0, 1):
        assert m.log_prior[c] == pytest.approx(ref[bool(c)][0], abs=1e-12)
        assert m.feature_log_prob[c] == pytest.approx(ref[bool(c)][1], abs=1e-12)
    sk = MultinomialNB().fit(X, y)
    assert np.allclose(sk.feature_log_prob_, m.feature_log_prob, atol=1e-9)
    assert np.allclose(sk.class_log_prior_, m.log_prior, atol=1e-12)
    probe = rng.uniform(0, 5, size=(5, 3))
    for x, p in zip(probe, sk.predict_proba(probe)[:, 1]):
        assert nb_score(m, x) == pytest.approx(p, abs=1e-9)
        assert nb_score(m, x) == pytest.approx(oracle.nb_posterior(ref, x), abs=1e-12)


def test_nb_score_zero_evidence_is_prior():
    m = nb_train([((1.0, 0.0), True), ((0.0, 1.0), False), ((0.0, 2.0), False)])
    assert nb_score(m, (0.0, 0.0)) == pytest.approx(1 / 3)


def test_nb_score_symmetric():
    m = NbModel((math.log(0.5), math.log(0.5)), ((math.log(0.3), math.log(0.7)), (math.log(0.7), math.log(0.3))))
    assert nb_score(m, (2.0, 2.0)) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        nb_score(m, (1.0,))


@settings(max_examples=150)
@given(st.lists(st.floats(0, 50, allow_subnormal=False), min_size=2, max_size=2),
       st.lists(st.floats(0, 50, allow_subnormal=False), min_size=2, max_size=2),
       st.booleans())
def test_nb_two_row_property(a, b, first_label):
    rows = [(tuple(a), first_label), (tuple(b), not first_label)]
    m = nb_train(rows)
    for c, label in ((0, False), (1, True)):
        x = a if first_label == label else b
        total = sum(x) + 2
        want = [math.log((v + 1) / total) for v in x]
        assert m.feature_log_prob[c] == pytest.approx(want, abs=1e-9)
        assert sum(math.exp(v) for v in m.feature_log_prob[c]) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=100)
@given(st.lists(st.tuples(st.floats(0, 10), st.floats(0, 10)), min_size=4, max_size=4),
       st.lists(st.tuples(st.floats(0, 10), st.floats(0, 10)), min_size=3, max_size=6),
       st.floats(0.1, 10))
def test_nb_ranking_invariant_under_common_scaling_with_equal_priors(train, probes, k):
    rows = [(x, i % 2 == 0) for i, x in enumerate(train)]
    m = nb_train(rows)
    assert m.log_prior[0] == m.log_prior[1]

    def margin(x):
        return sum(v * (p - n) for v, p, n in zip(x, m.feature_log_prob[1], m.feature_log_prob[0]))

    base = [margin(x) for x in probes]
    scaled = [margin([k * v for v in x]) for x in probes]
    for i in range(len(probes)):
        for j in range(len(probes)):
            if base[i] > base[j] + 1e-9:
                assert scaled[i] > scaled[j]


def test_model_file_round_trip(tmp_path):
    m = nb_train([((1.0, 0.5), True), ((0.2, 1.0), False)], feature_names=("tfidf", "first_pos_rel"))
    save_model(m, tmp_path / "m.json", {"model": "kea"})
    back, meta = load_model(tmp_path / "m.json")
    assert back == m and meta["model"] == "kea"
    probe = (0.7, 0.3)
    assert nb_score(back, probe) == nb_score(m, probe)
    data = json.loads((tmp_path / "m.json").read_text())
    assert data["features"] == ["tfidf", "first_pos_rel"]


# -- supervised rankers -------------------------------------------------------------

def test_kea_prefers_early_candidates():
    cs = cset((0, "grid/NN"), (90, "nodes/NNS"))
    # positives occur early, negatives late
    m = nb_train([((1.0, 0.0), True), ((1.0, 1.0), False)], feature_names=("tfidf", "first_pos_rel"))
    assert rank_kea(cs, DfTable(3, {}), m).stems() == ["grid", "node"]


def test_kea_empty_set():
    m = nb_train([((1.0, 0.0), True), ((1.0, 1.0), False)])
    assert rank_kea(CandidateSet("d", 3, {}), DfTable(3, {}), m).items == ()


def test_wingnus_length_feature_decides():
    cs = cset((0, "grid/NN"), (0 + 0, "mobile/JJ grid/NN"))
    long_good = nb_train([((0.0, 0.0, 3.0), True), ((0.0, 0.0, 1.0), False)])
    short_good = nb_train([((0.0, 0.0, 1.0), True), ((0.0, 0.0, 3.0), False), ((1.0, 0.0, 0.0), False)])
    df = DfTable(1, {"grid": 1, "mobil grid": 1})  # zero idf: only length matters
    assert rank_wingnus(cs, df, long_good).stems()[0] == "mobil grid"
    assert rank_wingnus(cs, df, short_good).stems()[0] == "grid"
    with pytest.raises(ValueError):
        rank_kea(cs, df, long_good)


def test_training_rows_labels(corpus, refs):
    df = compute_df(corpus[:3])
    rows = build_training_rows(corpus[:3], refs, "kea", df)
    n_pos = sum(label for _, label in rows)
    expected = 0
    for doc in corpus[:3]:
        gold = set().union(*refs[doc.id])
        expected += len(set(oracle.cands_ngrams(doc, kea=True)) & gold)
    assert n_pos == expected > 0
    assert all(len(x) == 2 for x, _ in rows)
    assert len(build_training_rows(corpus[:3], refs, "wingnus", df)[0][0]) == 3


def test_training_rows_errors(corpus):
    df = compute_df(corpus[:1])
    refs = ReferenceSet({corpus[0].id: (frozenset({"nowher to be found"}),)})
    with pytest.raises(ValueError, match="no positive"):
        build_training_rows(corpus[:1], refs, "kea", df)
    with pytest.raises(ValueError, match="requires no training"):
        build_training_rows(corpus[:1], refs, "tfidf", df)


def test_training_rows_empty_doc_contributes_nothing(corpus, refs):
    df = compute_df(corpus[:3])
    empty = make_doc(("body", ["the/DT ./."]), doc_id="E")
    r2 = ReferenceSet({**refs.by_doc, "E": (frozenset({"x"}),)})
    assert len(build_training_rows([*corpus[:3], empty], r2, "kea", df)) == \
        len(build_training_rows(corpus[:3], refs, "kea", df))


# -- KP-Miner -------------------------------------------------------------------

def test_kpminer_no_multiword_is_tfidf():
    cs = cset((0, "grid/NN"), (4, "grid/NN"), (8, "nodes/NNS"))
    df = DfTable(9, {"grid": 3})
    assert [(i.stem, i.score) for i in rank_kpminer(cs, df).items] == \
        [(i.stem, i.score) for i in rank_tfidf(cs, df).items]


def test_kpminer_boost_clip():
    occs = [(i * 3, "grid/NN") for i in range(90)] + [(300 + i * 3, "mobile/JJ user/NN") for i in range(10)]
    cs = cset(*occs)
    assert kpminer_boost(cs) == pytest.approx(min(100 / (10 * 2.3), 3.0)) == 3.0
    assert kpminer_boost(cs, alpha=20) == pytest.approx(100 / 200)


def test_kpminer_boost_applies_to_multiword_only():
    cs = cset((0, "mobile/JJ user/NN"), (5, "grid/NN"))
    df = DfTable(9, {})
    scores = {i.stem: i.score for i in rank_kpminer(cs, df).items}
    assert scores["mobil user"] == pytest.approx(math.log2(10) * min(2 / 2.3, 3.0))
    assert scores["grid"] == pytest.approx(math.log2(10))


@settings(max_examples=100)
@given(st.floats(1e3, 1e9))
def test_kpminer_large_alpha_shrinks_multiword(alpha):
    cs = cset((0, "mobile/JJ user/NN"), (5, "grid/NN"))
    scores = {i.stem: i.score for i in rank_kpminer(cs, DfTable(9, {}), alpha=alpha).items}
    assert scores["mobil user"] <= 2 / alpha * math.log2(10) + 1e-12
    assert scores["mobil user"] < scores["grid"]


# -- TopicRank ----------------------------------------------------------------------

def test_cluster_identical_stem_sets():
    cs = cset((0, "grid/NN services/NNS"), (4, "services/NNS grid/NN"))
    assert [[c.stem_form for c in t] for t in cluster_topics(cs)] == [["grid servic", "servic grid"]]


def test_cluster_disjoint():
    cs = cset((0, "grid/NN"), (4, "nodes/NNS"))
    assert len(cluster_topics(cs)) == 2


SIX = [(0, "grid/NN services/NNS"), (3, "grid/NN"), (6, "mobile/JJ grid/NN computing/NN"),
       (10, "sensor/NN networks/NNS"), (13, "wireless/JJ sensor/NN networks/NNS"), (17, "energy/NN")]


def test_cluster_matches_naive_hac():
    cs = cset(*SIX)
    got = [[c.stem_form for c in t] for t in cluster_topics(cs)]
    assert got == oracle.hac([c.stem_form for c in cs])
    assert len(got) == 3


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.sampled_from("abcdef"), min_size=1, max_size=3, unique=True),
                min_size=1, max_size=9, unique_by=lambda w: " ".join(w)))
def test_cluster_matches_naive_hac_random(phrases):
    occs = []
    pos = 0
    for words in phrases:
        occs.append((pos, " ".join(f"{w * 3}/NN" for w in words)))
        pos += len(words) + 1
    cs = cset(*occs)
    got = [[c.stem_form for c in t] for t in cluster_topics(cs)]
    assert got == oracle.hac([c.stem_form for c in cs])


def test_topic_graph_inverse_distance():
    cs = cset((0, "grid/NN"), (1, "nodes/NNS"), (20, "energy/NN"))
    topics = cluster_topics(cs)
    w = topic_graph(topics)
    names = [t[0].stem_form for t in topics]
    g, n, e = names.index("grid"), names.index("node"), names.index("energi")
    assert w[g, n] == pytest.approx(1.0)
    assert w[g, e] == pytest.approx(1 / 20)
    assert w[g, n] > w[n, e] > w[g, e]
    assert np.allclose(w, w.T)


def test_topicrank_symmetric_topics_equal():
    cs = cset((0, "grid/NN"), (2, "nodes/NNS"))
    items = rank_topicrank(cs).items
    assert items[0].score == pytest.approx(items[1].score)
    assert [i.stem for i in items] == ["grid", "node"]


def test_topicrank_representative_is_first_occurring():
    cs = cset((5, "grid/NN services/NNS"), (1, "services/NNS"), (9, "energy/NN"))
    stems = rank_topicrank(cs).stems()
    assert "servic" in stems and "grid servic" not in stems


def test_topicrank_single_topic_scores_one():
    cs = cset((0, "grid/NN"), (4, "grid/NN"))
    assert [(i.stem, i.score) for i in rank_topicrank(cs).items] == [("grid", pytest.approx(1.0))]
    assert rank_topicrank(CandidateSet("d", 1, {})).items == ()


def test_topicrank_scores_sum_to_one(corpus):
    for doc in corpus:
        topics = rank_topics(select_noun_adj_sequences(doc))
        assert sum(t.score for t in topics) == pytest.approx(1.0, abs=1e-6)


# -- redundancy -----------------------------------------------------------------------

def test_redundancy_examples():
    assert redundancy_filter(rl("grid comput servic", "comput servic", "mobil")).stems() == ["grid comput servic", "mobil"]
    assert redundancy_filter(rl("grid", "mobil", "energi")).stems() == ["grid", "mobil", "energi"]
    assert redundancy_filter(rl("comput", "comput servic")).stems() == ["comput", "comput servic"]


def test_redundancy_requires_whole_words():
    assert redundancy_filter(rl("grids servic", "grid")).stems() == ["grids servic", "grid"]


stems_lists = st.lists(
    st.lists(st.sampled_from(["grid", "comput", "servic", "mobil", "node"]), min_size=1, max_size=3).map(" ".join),
    unique=True, max_size=10)


@settings(max_examples=200)
@given(stems_lists)
def test_redundancy_properties(stems):
    ranked = rl(*stems)
    out = redundancy_filter(ranked)
    assert redundancy_filter(out) == out
    it = iter(ranked.items)
    assert all(x in it for x in out.items)
    if stems:
        assert out.items[0] == ranked.items[0]
    assert out.stems() == oracle.redundancy(stems)
