#include "kernel_properties.hpp"

#include <doctest.h>

using namespace testsupport;

namespace {

void expect(const PropertyResult& r)
{
    INFO(r.name << ": " << r.first);
    CHECK(r.ok());
}

} // namespace

TEST_CASE("property: interval scaling commutes with the closed hull") { expect(check_interval_scaling(11, 40)); }

TEST_CASE("property: scaled shrinking sets") { expect(check_shrinking_scaling(12, 20)); }

TEST_CASE("property: widening by orthogonal complements") { expect(check_orthogonal_widening(13, 40)); }

TEST_CASE("property: coordinate-subspace restrictions") { expect(check_coordinate_restrictions(14, 40)); }

TEST_CASE("property: eps-subdifferentials are nested") { expect(check_nesting(15, 40)); }

TEST_CASE("property: enlargement chain") { expect(check_chain(16, 40)); }

TEST_CASE("property: member enlargements inside the 3eps-subdifferential")
{
    expect(check_inclusion_3eps(17, 20, supdiff::Variant::Breve));
    expect(check_inclusion_3eps(18, 20, supdiff::Variant::Hat));
}
