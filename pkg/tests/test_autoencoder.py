import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from itl.autoencoder import ItlAutoencoder
from itl.config import STREAM_DATA
from itl.data_io import make_synthetic
from itl.numerics import make_rng


@pytest.fixture(scope="module")
def ring_data():
    return make_synthetic("ring8", 256, 0.25, make_rng(0, STREAM_DATA)).data


@pytest.fixture(scope="module")
def fitted(ring_data):
    model = ItlAutoencoder(latent_dim=2, hidden=(16, 16), epochs=30, batch_size=32,
                           prior_scale=1.0, seed=1)
    return model.fit(ring_data)


class TestSklearnApi:
    def test_get_set_params_round_trip(self):
        model = ItlAutoencoder(latent_dim=3, sigma=0.5)
        params = model.get_params()
        assert params["latent_dim"] == 3
        assert params["sigma"] == 0.5
        model.set_params(latent_dim=4)
        assert model.latent_dim == 4

    def test_clone(self):
        model = ItlAutoencoder(latent_dim=3, reg_weight=2.0)
        twin = clone(model)
        assert twin.get_params() == model.get_params()

    def test_transform_before_fit_raises(self, ring_data):
        with pytest.raises(NotFittedError):
            ItlAutoencoder().transform(ring_data)

    def test_sample_before_fit_raises(self):
        with pytest.raises(NotFittedError):
            ItlAutoencoder().sample(4)


class TestFit:
    def test_fit_sets_attributes(self, fitted, ring_data):
        assert fitted.n_features_in_ == 2
        assert len(fitted.history_) == 30
        assert fitted.encoder_.in_dim == 2
        assert fitted.encoder_.out_dim == 2
        assert fitted.decoder_.out_dim == 2

    def test_fit_deterministic(self, ring_data):
        kwargs = dict(latent_dim=2, hidden=(8,), epochs=3, batch_size=32,
                      prior_scale=1.0, seed=7)
        a = ItlAutoencoder(**kwargs).fit(ring_data)
        b = ItlAutoencoder(**kwargs).fit(ring_data)
        for wa, wb in zip(a.encoder_.arrays(), b.encoder_.arrays()):
            assert np.array_equal(wa, wb)

    def test_decoder_mirrors_hidden_sizes(self, ring_data):
        model = ItlAutoencoder(latent_dim=2, hidden=(16, 8), epochs=1,
                               prior_scale=1.0).fit(ring_data)
        enc_dims = [(s.in_dim, s.out_dim) for s in model.encoder_.specs]
        dec_dims = [(s.in_dim, s.out_dim) for s in model.decoder_.specs]
        assert enc_dims == [(2, 16), (16, 8), (8, 2)]
        assert dec_dims == [(2, 8), (8, 16), (16, 2)]

    def test_sigmoid_output_bounds_reconstruction(self, ring_data):
        data01 = (ring_data - ring_data.min()) / (ring_data.max() - ring_data.min())
        model = ItlAutoencoder(latent_dim=2, hidden=(8,), epochs=2, sigmoid_output=True,
                               prior_scale=1.0).fit(data01)
        recon = model.reconstruct(data01)
        assert np.all((recon > 0.0) & (recon < 1.0))

    def test_bad_latent_dim(self, ring_data):
        with pytest.raises(ValueError, match="latent_dim"):
            ItlAutoencoder(latent_dim=0).fit(ring_data)


class TestTransformAndSample:
    def test_transform_shape(self, fitted, ring_data):
        codes = fitted.transform(ring_data)
        assert codes.shape == (256, 2)

    def test_fit_transform_matches_transform(self, ring_data):
        kwargs = dict(latent_dim=2, hidden=(8,), epochs=2, prior_scale=1.0, seed=2)
        codes_a = ItlAutoencoder(**kwargs).fit_transform(ring_data)
        model = ItlAutoencoder(**kwargs).fit(ring_data)
        assert np.array_equal(codes_a, model.transform(ring_data))

    def test_inverse_transform_round(self, fitted, ring_data):
        codes = fitted.transform(ring_data)
        recon = fitted.inverse_transform(codes)
        assert recon.shape == ring_data.shape
        assert np.array_equal(recon, fitted.reconstruct(ring_data))

    def test_feature_count_checked(self, fitted):
        with pytest.raises(ValueError, match="features"):
            fitted.transform(np.zeros((4, 3)))
        with pytest.raises(ValueError, match="dims"):
            fitted.inverse_transform(np.zeros((4, 3)))

    def test_sample_shape_and_determinism(self, fitted):
        a = fitted.sample(16, seed=3)
        b = fitted.sample(16, seed=3)
        assert a.shape == (16, 2)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, fitted.sample(16, seed=4))

    def test_sample_count_validated(self, fitted):
        with pytest.raises(ValueError, match="n"):
            fitted.sample(0)

    def test_score_is_negative_mse(self, fitted, ring_data):
        score = fitted.score(ring_data)
        recon = fitted.reconstruct(ring_data)
        assert np.isclose(score, -np.mean((ring_data - recon) ** 2), rtol=1e-12)
        assert score <= 0.0

    def test_training_improves_score(self, ring_data):
        short = ItlAutoencoder(latent_dim=2, hidden=(16,), epochs=1, batch_size=32,
                               prior_scale=1.0, seed=1).fit(ring_data)
        longer = ItlAutoencoder(latent_dim=2, hidden=(16,), epochs=30, batch_size=32,
                                prior_scale=1.0, seed=1).fit(ring_data)
        assert longer.score(ring_data) > short.score(ring_data)
