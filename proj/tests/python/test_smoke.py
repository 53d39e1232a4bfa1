import pytest

import delayfp as dfp


@pytest.fixture(scope="module")
def codebook():
    return dfp.generate_codebook(16, 1024, 42, 0.2)


@pytest.fixture(scope="module")
def host():
    return dfp.synth_signal(dfp.SynthKind.noise, 64 * 1024, 44100, 7)


def test_assignment_roundtrip():
    p = dfp.SchemeParams()
    a = dfp.user_to_params(11, p)
    assert (a.group, a.delay_index, a.delay) == (2, 3, 60)
    assert dfp.params_to_user(a.group, a.delay_index, p) == 11
    assert dfp.delay_to_index(41, p, 2) == 2
    assert dfp.delay_to_index(300, p, 2) is None


def test_codebook_properties(codebook):
    assert codebook.groups == 16 and codebook.n == 1024
    assert set(codebook.codes[0].samples) <= {-1.0, 1.0}
    assert dfp.max_cyclic_crosscorr(codebook.codes[0].samples, codebook.codes[1].samples) <= 0.2


def test_embed_attack_detect(codebook, host):
    p = dfp.SchemeParams()
    y = dfp.embed_stream(host, 11, dfp.Scheme.improved, p, codebook)
    assert len(y) == len(host)
    shifted = dfp.time_shift(y, 300)
    assert dfp.detect_improved(shifted, codebook, p).traced_users == [11]
    assert dfp.detect_original(shifted, codebook, p).traced_users != [11]

    report = dfp.detect_improved(dfp.crop(y, 64), codebook, p)
    d = dfp.trace_report_dict(report)
    assert d["traced_users"] == [11]
    assert d["hits"][0]["corrected_delay"] == 60


def test_collusion(codebook):
    p = dfp.SchemeParams()
    big = dfp.synth_signal(dfp.SynthKind.noise, 512 * 1024, 44100, 7)
    copies = [dfp.embed_stream(big, u, dfp.Scheme.original, p, codebook) for u in (3, 9)]
    avg = dfp.collude_average(copies)
    assert dfp.detect_original(avg, codebook, p).traced_users == [3, 9]


def test_wav_roundtrip(tmp_path):
    s = dfp.Signal([0.5, -1.0, 0.0, 16384 / 32768], 22050)
    path = str(tmp_path / "x.wav")
    dfp.write_wav(s, path)
    back = dfp.read_wav(path)
    assert back.samples == s.samples and back.sample_rate == 22050
    with pytest.raises(dfp.Error):
        dfp.read_wav(str(tmp_path / "missing.wav"))


def test_small_experiment():
    cfg = dfp.ExperimentConfig()
    cfg.copies = 10
    cfg.set("master_seed", "9")
    report = dfp.run_experiment(cfg)
    assert report.rate_for(dfp.Scheme.improved).rate == 1.0
    assert report.rate_for(dfp.Scheme.original).rate <= 0.3
    summary = dfp.experiment_report_dict(report)
    assert summary["config"]["master_seed"] == 9
    assert report.rows().count("\n") == 21

    cfg.copies = 0
    with pytest.raises(dfp.Error):
        dfp.run_experiment(cfg)
