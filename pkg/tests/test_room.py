import json

import numpy as np
import pytest

from vicaug.errors import GeometryError, MaterialLookupError, ParameterError
from vicaug.rng import RngState
from vicaug.room import (
    SPEED_OF_SOUND,
    RoomConfig,
    SourceMicGeometry,
    default_materials,
    direct_path_index,
    image_source_arrivals,
    image_source_rir,
    load_materials,
    material_absorption,
    sample_geometry,
    schroeder_curve,
)

SR = 16000
STOCK_ROOMS = ((4.0, 4.0, 2.5), (10.0, 10.0, 3.5), (2.5, 1.5, 1.5))


def centered_geometry(dims, distance, seed=0):
    """Source at the given distance from a room-centered mic, away from walls."""
    dims = np.asarray(dims, dtype=np.float64)
    mic = dims / 2
    rng = RngState(seed)
    margin = 0.25 * dims.min()
    for _ in range(200):
        u = rng.standard_normal(3)
        u /= np.linalg.norm(u)
        src = mic + distance * u
        if np.all(src > margin) and np.all(src < dims - margin):
            return SourceMicGeometry(mic, src, float(np.linalg.norm(src - mic)))
    raise AssertionError("no interior placement found")


class TestMaterials:
    def test_physical_ordering(self):
        assert material_absorption("hairy carpet") > material_absorption("marble floor")

    def test_unknown(self):
        with pytest.raises(MaterialLookupError, match="velvet"):
            material_absorption("velvet")

    def test_all_in_unit_interval(self):
        for alpha in default_materials().values():
            assert 0.0 < alpha <= 1.0

    def test_registry_override(self, tmp_path):
        path = tmp_path / "mats.json"
        path.write_text(json.dumps({"felt wall": 0.6}))
        registry = load_materials(path)
        assert material_absorption("felt_wall", registry) == 0.6

    def test_registry_rejects_bad_alpha(self, tmp_path):
        path = tmp_path / "mats.json"
        path.write_text(json.dumps({"mirror": 0.0}))
        with pytest.raises(ParameterError):
            load_materials(path)


class TestRoomConfig:
    def test_rejects_bad_dims(self):
        with pytest.raises(ParameterError):
            RoomConfig((4.0, -1.0, 2.0), "x", 0.5)

    def test_rejects_bad_alpha(self):
        with pytest.raises(ParameterError):
            RoomConfig((4.0, 4.0, 2.5), "x", 1.5)


class TestSampleGeometry:
    def test_degenerate_distance(self):
        room = RoomConfig((4.0, 4.0, 2.5), "x", 0.5)
        for seed in range(20):
            geo = sample_geometry(room, 0.5, 0.5, RngState(seed))
            assert abs(np.linalg.norm(geo.source - geo.mic) - 0.5) < 1e-9
            assert np.all(geo.source > 0) and np.all(geo.source < room.dims)
            assert np.all(geo.mic > 0) and np.all(geo.mic < room.dims)

    def test_distance_exceeds_room(self):
        room = RoomConfig((2.5, 1.5, 1.5), "x", 0.5)
        with pytest.raises(GeometryError):
            sample_geometry(room, 10.0, 10.0, RngState(0))

    def test_deterministic(self):
        room = RoomConfig((4.0, 4.0, 2.5), "x", 0.5)
        a = sample_geometry(room, 0.03, 3.0, RngState(11))
        b = sample_geometry(room, 0.03, 3.0, RngState(11))
        assert np.array_equal(a.mic, b.mic)
        assert np.array_equal(a.source, b.source)

    def test_bad_range(self):
        room = RoomConfig((4.0, 4.0, 2.5), "x", 0.5)
        with pytest.raises(ParameterError):
            sample_geometry(room, 2.0, 1.0, RngState(0))


class TestArrivals:
    def test_fully_absorbing_single_arrival(self):
        room = RoomConfig((4.0, 4.0, 2.5), "x", 1.0)
        geo = centered_geometry(room.dims, 0.7)
        delays, amps, orders = image_source_arrivals(room, geo)
        assert len(delays) == 1
        assert orders[0] == 0
        assert amps[0] == pytest.approx(1.0 / (4.0 * np.pi * 0.7), rel=1e-9)
        assert delays[0] == pytest.approx(0.7 / SPEED_OF_SOUND)

    def test_first_order_has_seven_arrivals(self):
        room = RoomConfig((4.0, 4.0, 2.5), "x", 0.3, max_order=1)
        geo = centered_geometry(room.dims, 0.9)
        delays, amps, orders = image_source_arrivals(room, geo)
        assert len(delays) == 7
        assert np.sum(orders == 0) == 1
        assert np.sum(orders == 1) == 6

    def test_order_energy_decays_for_interior_geometry(self):
        # holds away from walls; grazing geometries can put a first-order
        # image almost on top of the source and break the ordering
        for dims in STOCK_ROOMS:
            for alpha in (0.5, 0.7, 0.9):
                room = RoomConfig(dims, "x", alpha, max_order=6)
                geo = centered_geometry(dims, 0.2 * min(dims))
                _, amps, orders = image_source_arrivals(room, geo)
                energy = np.array(
                    [np.sum(amps[orders == r] ** 2) for r in range(7)]
                )
                assert np.all(np.diff(energy) <= 1e-15)


class TestRir:
    def test_direct_path_delay(self):
        room = RoomConfig((4.0, 4.0, 2.5), "x", 1.0)
        for seed in range(5):
            geo = sample_geometry(room, 0.3, 1.5, RngState(seed))
            rir = image_source_rir(room, geo, SR)
            first = int(np.argmax(np.abs(rir.samples) > 0))
            exact = geo.distance / SPEED_OF_SOUND * SR
            assert first in (int(np.floor(exact)), int(np.ceil(exact)))

    def test_amplitude_halves_when_distance_doubles(self):
        # distances with integral sample delays keep the direct arrival on
        # one tap, so the peak reads the 1/(4*pi*d) law directly
        room = RoomConfig((10.0, 10.0, 3.5), "x", 1.0)
        d_near = SPEED_OF_SOUND * 40 / SR  # 0.8575 m
        mic = np.array([5.0, 5.0, 1.75])
        peaks = []
        for d in (d_near, 2 * d_near):
            geo = SourceMicGeometry(mic, mic + np.array([d, 0.0, 0.0]), d)
            peaks.append(np.max(np.abs(image_source_rir(room, geo, SR).samples)))
        assert peaks[0] / peaks[1] == pytest.approx(2.0, rel=0.02)

    def test_interpolation_preserves_arrival_mass(self):
        # fractional delays split the arrival over two taps whose sum is
        # exactly the image amplitude
        room = RoomConfig((10.0, 10.0, 3.5), "x", 1.0)
        geo = centered_geometry(room.dims, 0.8)
        rir = image_source_rir(room, geo, SR)
        assert np.sum(rir.samples) == pytest.approx(
            1.0 / (4.0 * np.pi * geo.distance), rel=1e-9
        )

    def test_energy_monotone_in_absorption(self):
        geo = centered_geometry((4.0, 4.0, 2.5), 0.8)
        energies = []
        for alpha in np.arange(0.1, 1.0, 0.1):
            room = RoomConfig((4.0, 4.0, 2.5), "x", float(alpha), max_order=6)
            rir = image_source_rir(room, geo, SR)
            energies.append(np.sum(rir.samples**2))
        assert np.all(np.diff(energies) < 0)

    def test_deterministic(self):
        room = RoomConfig((4.0, 4.0, 2.5), "x", 0.3)
        geo = centered_geometry(room.dims, 0.8)
        a = image_source_rir(room, geo, SR)
        b = image_source_rir(room, geo, SR)
        assert np.array_equal(a.samples, b.samples)

    def test_schroeder_monotone(self):
        room = RoomConfig((4.0, 4.0, 2.5), "x", 0.3, max_order=6)
        geo = centered_geometry(room.dims, 1.0)
        curve = schroeder_curve(image_source_rir(room, geo, SR))
        assert np.all(np.diff(curve) <= 0)

    def test_direct_index_helper(self):
        geo = centered_geometry((4.0, 4.0, 2.5), 0.686)  # 2 ms at c=343
        assert direct_path_index(geo, SR) == round(geo.distance / SPEED_OF_SOUND * SR)
