#include <doctest.h>

#include "ipsw/field.hpp"

using namespace ipsw;

namespace {
FieldElement f7(int64_t v) { return FieldElement::from_int(FieldSpec::prime(7), v); }
FieldElement q(const char* s) { return FieldElement::parse(FieldSpec::rational(), s); }
}  // namespace

TEST_CASE("prime field arithmetic") {
    CHECK((f7(5) + f7(4)) == f7(2));
    CHECK((f7(3) * f7(0)).is_zero());
    CHECK(f7(3).inv() == f7(5));
    CHECK(f7(-1).residue() == 6);
    CHECK(f7(3).pow(6).is_one());
    CHECK_THROWS_AS(f7(0).inv(), DivisionByZero);
}

TEST_CASE("rational arithmetic") {
    CHECK((q("1/2") + q("1/3")) == q("5/6"));
    CHECK(q("2/3").inv() == q("3/2"));
    CHECK(q("4/6").to_string() == "2/3");
    CHECK(q("-3").to_string() == "-3");
    CHECK_THROWS_AS(q("0").inv(), DivisionByZero);
}

TEST_CASE("mixed specs are rejected") {
    CHECK_THROWS_AS(f7(1) + q("1"), DomainError);
    CHECK_THROWS_AS(f7(1) + FieldElement::from_int(FieldSpec::prime(11), 1), DomainError);
}

TEST_CASE("field spec parsing") {
    CHECK(FieldSpec::parse("p=101") == FieldSpec::prime(101));
    CHECK(FieldSpec::parse("101") == FieldSpec::prime(101));
    CHECK(FieldSpec::parse("rational").is_rational());
    CHECK(FieldSpec::parse("Q").is_rational());
    CHECK_THROWS_AS(FieldSpec::parse("p=100"), DomainError);
    CHECK_THROWS(FieldSpec::parse("banana"));
    CHECK(FieldSpec::prime(101).to_string() == "p=101");
}

TEST_CASE("characteristic guard") {
    CHECK(characteristic_guard(FieldSpec::prime(7), 5));
    CHECK_FALSE(characteristic_guard(FieldSpec::prime(7), 7));
    CHECK(characteristic_guard(FieldSpec::rational(), 1'000'000'000));
}

TEST_CASE("primality") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(10007));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(561));
    CHECK(is_prime_u64((uint64_t{1} << 61) - 1));
}

TEST_CASE("field axioms on random elements of F_101") {
    const FieldSpec spec = FieldSpec::prime(101);
    for (int64_t a = -20; a < 20; a += 3)
        for (int64_t b = 1; b < 30; b += 4) {
            FieldElement x = FieldElement::from_int(spec, a), y = FieldElement::from_int(spec, b);
            CHECK((x * y) / y == x);
            CHECK((x - y) + y == x);
            CHECK(x * (y + y) == x * y + x * y);
        }
}
