"""
Tests for datasets, generators, tabular files and pool bookkeeping
"""

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.exceptions import ContractViolation, DatasetError, TableParseError
from app.models.dataset import Dataset, MixtureSpec, QueryBatch
from app.models.run import DatasetSource
from app.pooldata.generators import (
    PRESETS,
    generate_mixture,
    grid_means,
    inject_label_noise,
    preset_dataset,
    preset_spec,
)
from app.pooldata.pool import commit_query, init_pool, reduce_dataset, split
from app.pooldata.sources import label_noise_for, load_source
from app.pooldata.tables import load_table, save_table


def _spec(counts, seed=0, stddev=1.0):
    return MixtureSpec(
        class_count=len(counts),
        dims=3,
        per_class_counts=counts,
        class_means=[[float(k)] * 3 for k in range(len(counts))],
        class_stddev=stddev,
        seed=seed,
    )


def _labeled(labels, class_count=2):
    labels = np.asarray(labels)
    return Dataset(features=np.zeros((labels.size, 1)), labels=labels, class_count=class_count)


class TestDataset:
    def test_rejects_out_of_range_label(self):
        with pytest.raises(ValidationError):
            Dataset(features=[[0.0], [1.0]], labels=[0, 2], class_count=2)

    def test_rejects_non_finite_features(self):
        with pytest.raises(ValidationError):
            Dataset(features=[[0.0], [np.inf]], labels=[0, 1], class_count=2)

    def test_rejects_empty(self):
        with pytest.raises(ValidationError):
            Dataset(features=np.zeros((0, 2)), labels=[], class_count=2)

    def test_arrays_are_read_only(self, two_blobs):
        with pytest.raises(ValueError):
            two_blobs.features[0, 0] = 1.0


class TestGenerateMixture:
    def test_balanced_counts(self):
        ds = generate_mixture(_spec([100, 100]))
        assert ds.size == 200
        assert ds.class_counts().tolist() == [100, 100]

    def test_imbalanced_counts(self):
        ds = generate_mixture(_spec([950, 50]))
        assert ds.class_counts().tolist() == [950, 50]

    def test_same_spec_gives_identical_bytes(self):
        first = generate_mixture(_spec([30, 20], seed=4))
        second = generate_mixture(_spec([30, 20], seed=4))
        assert first.features.tobytes() == second.features.tobytes()
        assert np.array_equal(first.labels, second.labels)

    def test_shape_mismatch_is_rejected(self):
        with pytest.raises(ValidationError):
            MixtureSpec(class_count=2, dims=2, per_class_counts=[5, 5], class_means=[[0.0, 0.0]], class_stddev=1.0)

    def test_nonpositive_stddev_is_rejected(self):
        with pytest.raises(ValidationError):
            _spec([5, 5], stddev=0.0)

    def test_grid_means_are_unit_spaced(self):
        assert grid_means(4, 2) == [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]


class TestLabelNoise:
    def test_zero_rate_is_identity(self):
        ds = generate_mixture(_spec([20, 20]))
        noisy = inject_label_noise(ds, 0.0, seed=1)
        assert np.array_equal(noisy.labels, ds.labels)

    def test_full_rate_flips_every_binary_label(self):
        ds = generate_mixture(_spec([20, 20]))
        noisy = inject_label_noise(ds, 1.0, seed=1)
        assert np.array_equal(noisy.labels, 1 - ds.labels)

    def test_exact_flip_count_and_unchanged_features(self):
        ds = generate_mixture(_spec([250, 250, 250, 250]))
        noisy = inject_label_noise(ds, 0.3, seed=9)
        assert int(np.sum(noisy.labels != ds.labels)) == 300
        assert np.array_equal(noisy.features, ds.features)

    def test_rate_outside_unit_interval(self):
        with pytest.raises(DatasetError):
            inject_label_noise(generate_mixture(_spec([5, 5])), 1.5, seed=0)


class TestTables:
    def test_load_small_table(self, tmp_path):
        path = tmp_path / "small.csv"
        path.write_text("# classes=2\n0.5,1.0,0\n-1.5,2.0,1\n3.0,0.25,1\n")
        ds = load_table(path)
        assert (ds.size, ds.dims, ds.class_count) == (3, 2, 2)
        assert ds.labels.tolist() == [0, 1, 1]

    def test_label_beyond_declared_classes(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("# classes=2\n0.5,1.0,0\n0.5,1.0,2\n")
        with pytest.raises(TableParseError) as error:
            load_table(path)
        assert error.value.line == 3

    def test_empty_data_section(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("# classes=3\n")
        with pytest.raises(TableParseError, match="no samples"):
            load_table(path)

    def test_malformed_row_names_line(self, tmp_path):
        path = tmp_path / "malformed.csv"
        path.write_text("# classes=2\n0.5,1.0,0\n0.5,abc,1\n")
        with pytest.raises(TableParseError) as error:
            load_table(path)
        assert error.value.line == 3

    def test_non_finite_feature(self, tmp_path):
        path = tmp_path / "nan.csv"
        path.write_text("# classes=2\nnan,1.0,0\n")
        with pytest.raises(TableParseError):
            load_table(path)

    @pytest.mark.parametrize("row", ["1_000,0.5,0", "0.5,1_0.5,1", "0.5,1.0,1_0"])
    def test_digit_grouping_is_rejected(self, tmp_path, row):
        path = tmp_path / "grouped.csv"
        path.write_text(f"# classes=2\n0.5,1.0,0\n{row}\n")
        with pytest.raises(TableParseError) as error:
            load_table(path)
        assert error.value.line == 3

    def test_exponent_notation_is_accepted(self, tmp_path):
        path = tmp_path / "exponent.csv"
        path.write_text("# classes=2\n1e-3,-2.5E2,0\n.5,+3.,1\n")
        ds = load_table(path)
        np.testing.assert_allclose(ds.features, [[0.001, -250.0], [0.5, 3.0]])

    def test_missing_file(self, tmp_path):
        with pytest.raises(TableParseError, match="not found"):
            load_table(tmp_path / "absent.csv")

    def test_save_then_load_keeps_values(self, tmp_path, two_blobs):
        loaded = load_table(save_table(two_blobs, tmp_path / "blobs.csv"))
        assert np.array_equal(loaded.labels, two_blobs.labels)
        assert np.array_equal(loaded.features, two_blobs.features)


class TestSplit:
    def test_balanced_split(self):
        train, test = split(generate_mixture(_spec([100, 100])), 0.8, seed=0)
        assert train.size == 160 and test.size == 40
        assert train.class_counts().tolist() == [80, 80]

    def test_unbalanced_half_split(self):
        train, test = split(generate_mixture(_spec([10, 30])), 0.5, seed=0)
        assert train.class_counts().tolist() == [5, 15]
        assert (train.class_counts() + test.class_counts()).tolist() == [10, 30]

    def test_same_seed_same_assignment(self):
        ds = generate_mixture(_spec([40, 40]))
        first, _ = split(ds, 0.7, seed=3)
        second, _ = split(ds, 0.7, seed=3)
        assert np.array_equal(first.features, second.features)

    def test_singleton_class_cannot_stratify(self):
        with pytest.raises(DatasetError):
            split(_labeled([0, 0, 0, 1]), 0.5, seed=0)

    def test_reduce_keeps_class_distribution(self):
        reduced = reduce_dataset(generate_mixture(_spec([600, 400])), 100, seed=2)
        assert reduced.class_counts().tolist() == [60, 40]


class TestPool:
    def test_init_pool(self):
        pool = init_pool(5)
        assert pool.labeled == () and pool.unlabeled == (0, 1, 2, 3, 4)
        assert init_pool(1).unlabeled == (0,)

    def test_commit_moves_batch(self):
        pool = commit_query(init_pool(4), [0])
        pool = commit_query(pool, QueryBatch(indices=[2], cycle=1))
        assert pool.labeled == (0, 2)
        assert pool.unlabeled == (1, 3)

    def test_commit_entire_pool(self):
        pool = commit_query(init_pool(3), [2, 0, 1])
        assert pool.labeled == (2, 0, 1)
        assert pool.unlabeled == ()

    def test_commit_labeled_index_fails(self):
        pool = commit_query(init_pool(4), [1])
        with pytest.raises(ContractViolation):
            commit_query(pool, [1])

    def test_commit_duplicates_fail(self):
        with pytest.raises(ContractViolation):
            commit_query(init_pool(4), [2, 2])

    def test_partition_holds_after_commits(self):
        pool = init_pool(10)
        for batch in ([3, 1], [9], [0, 5, 7]):
            pool = commit_query(pool, batch)
            assert not set(pool.labeled) & set(pool.unlabeled)
            assert len(pool.labeled) + len(pool.unlabeled) == 10


class TestSources:
    def test_presets_scale_counts(self):
        spec = preset_spec("inspection", scale=0.1, seed=0)
        assert spec.per_class_counts == [222, 12]
        with pytest.raises(DatasetError):
            preset_spec("unknown")

    def test_noisy_preset_applies_noise(self):
        ds = preset_dataset("noisy", scale=0.1, seed=0)
        clean = generate_mixture(preset_spec("noisy", scale=0.1, seed=0))
        flipped = int(np.sum(ds.labels != clean.labels))
        assert flipped == int(round(PRESETS["noisy"]["noise"] * clean.size))

    def test_noise_only_touches_training_labels(self, grid_source):
        source = grid_source.model_copy(update={"label_noise": 0.25, "noise_seed": 1})
        clean_train, clean_test = load_source(grid_source)
        train, test = load_source(source)
        assert np.array_equal(test.labels, clean_test.labels)
        assert int(np.sum(train.labels != clean_train.labels)) == 40

    def test_table_source_with_test_file(self, tmp_path, two_blobs):
        train_path = save_table(two_blobs, tmp_path / "train.csv")
        test_path = save_table(two_blobs.subset(range(10)), tmp_path / "test.csv")
        train, test = load_source(DatasetSource(path=str(train_path), test_path=str(test_path)))
        assert train.size == two_blobs.size and test.size == 10

    def test_source_needs_exactly_one_origin(self, two_blob_spec):
        with pytest.raises(ValidationError):
            DatasetSource(mixture=two_blob_spec, preset="balanced")
        with pytest.raises(ValidationError):
            DatasetSource()

    def test_explicit_zero_noise_overrides_preset(self):
        train, _ = load_source(DatasetSource(preset="noisy", scale=0.1, label_noise=0.0))
        clean_train, _ = split(generate_mixture(preset_spec("noisy", scale=0.1, seed=0)), 0.8, seed=0)
        assert np.array_equal(train.labels, clean_train.labels)

    def test_unset_noise_uses_preset_noise(self):
        train, _ = load_source(DatasetSource(preset="noisy", scale=0.1))
        clean_train, _ = split(generate_mixture(preset_spec("noisy", scale=0.1, seed=0)), 0.8, seed=0)
        flipped = int(np.sum(train.labels != clean_train.labels))
        assert flipped == int(round(PRESETS["noisy"]["noise"] * clean_train.size))
        assert label_noise_for(DatasetSource(preset="noisy", scale=0.1)) == PRESETS["noisy"]["noise"]
        assert label_noise_for(DatasetSource(preset="balanced")) == PRESETS["balanced"]["noise"]
