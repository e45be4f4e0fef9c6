// Copyright 2026 The bellcal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "bellcal/optics_elements.hpp"
#include "test_support.hpp"

using namespace bellcal;
using Catch::Matchers::WithinAbs;

namespace {

const Complex kR{kInvSqrt2, 0.0};

double dist(const JonesVector& x, Complex v, Complex h) {
  return std::max(std::abs(x.v() - v), std::abs(x.h() - h));
}

}  // namespace

TEST_CASE("pbs_split_examples") {
  const auto d = pbs_split(JonesVector::diagonal());
  CHECK(dist(d.reflected, kI * kR, 0.0) < 1e-15);
  CHECK(dist(d.transmitted, 0.0, kR) < 1e-15);

  const auto h = pbs_split(JonesVector::basis(Polarization::kH));
  CHECK(h.reflected.norm_sq() == 0.0);
  CHECK(dist(h.transmitted, 0.0, 1.0) == 0.0);

  const auto v = pbs_split(JonesVector::basis(Polarization::kV));
  CHECK(dist(v.reflected, kI, 0.0) == 0.0);
  CHECK(v.transmitted.norm_sq() == 0.0);
}

TEST_CASE("bs_split_examples") {
  for (auto pol : {Polarization::kV, Polarization::kH}) {
    const auto in = JonesVector::basis(pol);
    const auto out = bs_split(in);
    CHECK(dist(out.reflected, kI * kR * in.v(), kI * kR * in.h()) < 1e-15);
    CHECK(dist(out.transmitted, kR * in.v(), kR * in.h()) < 1e-15);
    CHECK_THAT(out.reflected.norm_sq(), WithinAbs(0.5, 1e-15));
    CHECK_THAT(out.transmitted.norm_sq(), WithinAbs(0.5, 1e-15));
  }
}

TEST_CASE("hwp_apply_examples") {
  CHECK(dist(hwp_apply(JonesVector::basis(Polarization::kV)), 0.0, 1.0) == 0.0);
  CHECK(dist(hwp_apply(JonesVector::basis(Polarization::kH)), 1.0, 0.0) == 0.0);
  CHECK(dist(hwp_apply(JonesVector::diagonal()), kR, kR) == 0.0);
}

TEST_CASE("polarizer_apply_follows_malus") {
  const auto aligned = polarizer_apply(JonesVector::basis(Polarization::kV), Polarization::kV);
  CHECK(dist(aligned, 1.0, 0.0) == 0.0);
  CHECK(aligned.intensity() == 1.0);
  const auto crossed = polarizer_apply(JonesVector::basis(Polarization::kH), Polarization::kV);
  CHECK(crossed.intensity() == 0.0);
  const auto diag = polarizer_apply(JonesVector::diagonal(), Polarization::kV);
  CHECK(dist(diag, kR, 0.0) < 1e-15);
  CHECK_THAT(diag.intensity(), WithinAbs(0.5, 1e-15));

  for (int k = 0; k <= 12; ++k) {
    const double angle = std::numbers::pi * k / 12;
    const JonesVector in{std::cos(angle), std::sin(angle)};
    CHECK_THAT(polarizer_apply(in, Polarization::kV).intensity(),
               WithinAbs(std::cos(angle) * std::cos(angle), 1e-15));
  }
}

TEST_CASE("mirror_apply_examples") {
  CHECK(dist(mirror_apply(JonesVector::basis(Polarization::kV)), kI, 0.0) == 0.0);
  CHECK(dist(mirror_apply(JonesVector::basis(Polarization::kH)), 0.0, kI) == 0.0);
  const auto twice = mirror_apply(mirror_apply(JonesVector::diagonal()));
  CHECK(dist(twice, -kR, -kR) < 1e-15);
}

TEST_CASE("dichroic_combine_examples") {
  const TaggedBeam red{{Source::kS1, Path::kA}, Complex{kI} * JonesVector::basis(Polarization::kV)};
  const TaggedBeam blue{{Source::kS2, Path::kA}, JonesVector::basis(Polarization::kH)};
  const auto out = dichroic_combine(red, blue, Frequency::kOmega2, Path::kA);
  REQUIRE(out.beams.size() == 2);
  const TaggedBeam* r = out.find(Source::kS1);
  const TaggedBeam* b = out.find(Source::kS2);
  REQUIRE(r);
  REQUIRE(b);
  CHECK(r->tag.frequency() == Frequency::kOmega1);
  CHECK(b->tag.frequency() == Frequency::kOmega2);
  CHECK(r->field.h() == Complex{});
  CHECK(b->field.v() == Complex{});
  CHECK_THAT(out.intensity(), WithinAbs(red.field.norm_sq() + blue.field.norm_sq(), 1e-15));

  const TaggedBeam empty_blue{{Source::kS2, Path::kB}, JonesVector{}};
  const TaggedBeam red_h{{Source::kS1, Path::kB}, JonesVector::basis(Polarization::kH)};
  const auto only_red = dichroic_combine(red_h, empty_blue, Frequency::kOmega1, Path::kB);
  CHECK_THAT(only_red.intensity(), WithinAbs(1.0, 1e-15));
  CHECK(only_red.find(Source::kS2)->field.norm_sq() == 0.0);
}

TEST_CASE("dichroic_rejects_frequency_collision") {
  const TaggedBeam x{{Source::kS1, Path::kA}, JonesVector::diagonal()};
  const TaggedBeam y{{Source::kS1, Path::kB}, JonesVector::diagonal()};
  try {
    (void)dichroic_combine(x, y, Frequency::kOmega1, Path::kA);
    FAIL("expected FrequencyCollision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFrequencyCollision);
  }
}

TEST_CASE("dichroic_never_mixes_frequency_tags") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const TaggedBeam red{{Source::kS1, Path::kA}, testing::random_jones(gen)};
    const TaggedBeam blue{{Source::kS2, Path::kB}, testing::random_jones(gen)};
    for (auto refl : {Frequency::kOmega1, Frequency::kOmega2}) {
      const auto out = dichroic_combine(red, blue, refl, Path::kB);
      for (const auto& beam : out.beams) {
        const TaggedBeam& src = beam.tag.source == Source::kS1 ? red : blue;
        // Each output component is a pure phase times its own input.
        CHECK_THAT(std::abs(inner(src.field, beam.field)), WithinAbs(1.0, 1e-12));
        CHECK(beam.tag.path == Path::kB);
      }
    }
  }
}

TEST_CASE("element_matrices_satisfy_their_invariants") {
  for (const auto& e : {elements::pbs(), elements::bs(), elements::hwp(), elements::mirror()}) {
    CHECK(e.lossless());
    CHECK(is_unitary(e));
  }
  for (auto axis : {Polarization::kV, Polarization::kH}) {
    const auto p = elements::polarizer(axis).transfer("in", "out");
    CHECK(max_abs(p * p - p) < 1e-12);
    CHECK_FALSE(is_unitary(elements::polarizer(axis)));
  }
  const auto dm = elements::dichroic(Frequency::kOmega2);
  for (const auto& port : dm.inputs) {
    const auto t = dm.transfer(port, "out");
    CHECK(t(0, 1) == Complex{});
    CHECK(t(1, 0) == Complex{});
    CHECK(t(0, 0) == t(1, 1));
  }
}

TEST_CASE("lossless_elements_conserve_intensity") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = testing::random_jones(gen);
    const auto p = pbs_split(in);
    CHECK_THAT(p.reflected.norm_sq() + p.transmitted.norm_sq(), WithinAbs(1.0, 1e-12));
    CHECK(inner(p.reflected, p.transmitted) == Complex{});
    const auto b = bs_split(in);
    CHECK_THAT(b.reflected.norm_sq() + b.transmitted.norm_sq(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(hwp_apply(in).norm_sq(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(mirror_apply(in).norm_sq(), WithinAbs(1.0, 1e-12));
    const auto back = hwp_apply(hwp_apply(in));
    CHECK(std::abs(back.v() - in.v()) < 1e-12);
    CHECK(std::abs(back.h() - in.h()) < 1e-12);
  }
}
