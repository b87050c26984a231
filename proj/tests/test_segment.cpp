#include <catch2/catch_amalgamated.hpp>

#include "anisoflow/anisoflow.hpp"

using namespace aniso;

TEST_CASE("NiblackParams validation") {
    CHECK_NOTHROW(NiblackParams{5, 0.6}.validate());
    CHECK_THROWS_AS(NiblackParams({4, 0.6}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(NiblackParams({1, 0.6}).validate(), std::invalid_argument);
}

TEST_CASE("niblack on constant images is empty") {
    for (double k : {0.0, 0.6, 2.0}) {
        const BinaryMask m = niblack_threshold(Image2D(16, 16, 0.3), {5, k});
        CHECK(m.count() == 0);
    }
}

TEST_CASE("niblack 5x5 spike example") {
    // zeros except center = 1, window 5, k = 0.6: center mean 0.04,
    // std ~0.196, threshold ~0.1576 < 1 -> center is foreground.
    Image2D img(5, 5, 0.0);
    img.at(2, 2) = 1.0;
    const BinaryMask m = niblack_threshold(img, {5, 0.6});
    CHECK(m.get(2, 2));
    CHECK(m.count() == 1);
}

TEST_CASE("niblack window preconditions") {
    CHECK_THROWS_AS(niblack_threshold(Image2D(8, 8, 0.0), {4, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(niblack_threshold(Image2D(8, 8, 0.0), {9, 0.6}), std::invalid_argument);
}

TEST_CASE("niblack mask is invariant under positive affine gray transforms") {
    const Image2D img = make_noise(32, 17);
    Image2D scaled(32, 32);
    for (std::size_t i = 0; i < img.size(); ++i) scaled.data()[i] = 4.0 * img.data()[i] - 1.0;
    const BinaryMask a = niblack_threshold(img, {7, 0.6});
    const BinaryMask b = niblack_threshold(scaled, {7, 0.6});
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) CHECK(a.get(x, y) == b.get(x, y));
}

TEST_CASE("erode_square examples") {
    BinaryMask full(5, 5, true);
    const BinaryMask e = erode_square(full, 2);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) CHECK(e.get(x, y) == (x < 4 && y < 4));

    BinaryMask single(5, 5, false);
    single.set(2, 2, true);
    CHECK(erode_square(single, 2).count() == 0);

    BinaryMask block(7, 7, false);
    for (int y = 2; y < 5; ++y)
        for (int x = 2; x < 5; ++x) block.set(x, y, true);
    const BinaryMask be = erode_square(block, 2);
    CHECK(be.count() == 4);
    CHECK(be.get(2, 2));
    CHECK(be.get(3, 3));
}

TEST_CASE("remove_small_components strictness and connectivity") {
    // A 10x10 square (100 px) survives min_size = 100.
    BinaryMask m(20, 20, false);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) m.set(x, y, true);
    CHECK(remove_small_components(m, 100).count() == 100);
    // 9x11 = 99 px is removed.
    BinaryMask m2(20, 20, false);
    for (int y = 0; y < 11; ++y)
        for (int x = 0; x < 9; ++x) m2.set(x, y, true);
    CHECK(remove_small_components(m2, 100).count() == 0);
    // Diagonal pixels: one component of size 2 under 8-connectivity, two
    // singletons under 4-connectivity.
    BinaryMask d(4, 4, false);
    d.set(1, 1, true);
    d.set(2, 2, true);
    CHECK(remove_small_components(d, 2, 8).count() == 2);
    CHECK(remove_small_components(d, 2, 4).count() == 0);
}

TEST_CASE("segment pipeline on a noiseless fiber") {
    const Image2D fib = make_fiber_image({128, 30.0, 2.0, true});
    const MRParams mr{10.0, 1.5, {0.0, 30.0, 60.0, 90.0, 120.0, 150.0},
                      {FilterKind::Hybrid, InterpScheme::Linear, true, false}, {}, {}};
    const BinaryMask seg = segment_pipeline(fib, mr, 0.6, 2, 50);
    const BinaryMask core = fiber_mask(fib, 0.75, 50.0);
    REQUIRE(core.count() > 0);
    std::size_t covered = 0;
    const double c = (128 - 1) / 2.0;
    std::size_t total = 0;
    for (int y = 0; y < 128; ++y) {
        for (int x = 0; x < 128; ++x) {
            if (!core.get(x, y)) continue;
            if ((x - c) * (x - c) + (y - c) * (y - c) > 45.0 * 45.0) continue;
            ++total;
            if (seg.get(x, y)) ++covered;
        }
    }
    REQUIRE(total > 0);
    // Regression floor. With k = 0.6 the Niblack band on a ~4-px synthetic
    // fiber is about as wide as the bright core, and the 2x2 erosion then
    // removes a 1-px rim from it, so full coverage of the core is not
    // reachable with this recipe (observed ~0.33 at this scale and at
    // 512^2); the floor guards against regressions, not against the recipe.
    CHECK(static_cast<double>(covered) / static_cast<double>(total) >= 0.25);
    // Structure sanity: the surviving foreground hugs the bright ridges —
    // at most a few percent of it may fall into the dark valleys.
    std::size_t seg_total = 0, outside = 0;
    for (int y = 2; y < 126; ++y)
        for (int x = 2; x < 126; ++x)
            if (seg.get(x, y)) {
                ++seg_total;
                if (fib.at(x, y) < 0.4) ++outside;
            }
    REQUIRE(seg_total > 0);
    CHECK(static_cast<double>(outside) / static_cast<double>(seg_total) <= 0.05);
}

TEST_CASE("segment pipeline on a constant image is empty") {
    const MRParams mr{6.0, 1.5, {0.0, 45.0, 90.0, 135.0},
                      {FilterKind::Hybrid, InterpScheme::Linear, false, false}, {}, {}};
    CHECK(segment_pipeline(Image2D(64, 64, 0.5), mr, 0.6).count() == 0);
}

TEST_CASE("pipeline determinism") {
    const Image2D img = blend(make_noise(64, 3), make_fiber_image({64, 70.0, 1.0, true}), 0.5);
    const MRParams mr{8.0, 0.75, {0.0, 45.0, 90.0, 135.0},
                      {FilterKind::Hybrid, InterpScheme::Linear, false, false}, {}, {}};
    const BinaryMask a = segment_pipeline(img, mr, 0.6);
    const BinaryMask b = segment_pipeline(img, mr, 0.6);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) CHECK(a.get(x, y) == b.get(x, y));
}
