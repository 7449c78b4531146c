#include <doctest.h>

#include "rbsa/error.hpp"
#include "rbsa/tree_io.hpp"

using namespace rbsa;

namespace {
ErrorCode decode_error(const std::string& text) {
  try {
    decode_tree(Json::parse(text));
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::UnknownCase;
}
}  // namespace

TEST_CASE("shape literals round-trip") {
  for (const char* s : {"40B(20B(_,30R),50B)", "10B", "10B(5B,20R(17B(_,19R),25B))"}) {
    CHECK(format_shape(parse_shape(s)) == s);
  }
  CHECK(parse_shape("").empty());
  CHECK(parse_shape(" 40B ( 20R , _ ) ").size() == 2);
  CHECK(parse_shape("-5B").key(0) == -5);
}

TEST_CASE("bad shape literals") {
  for (const char* s : {"40", "40X", "40B(", "40B(1R)", "40B 50B", "B"}) {
    CHECK_THROWS_AS(parse_shape(s), Error);
  }
}

TEST_CASE("tree documents round-trip") {
  Tree t = parse_shape("40B(20B(_,30R),50B)");
  Json doc = encode_tree(t);
  CHECK(doc["key"] == 40);
  CHECK(doc["color"] == "B");
  CHECK(doc["left"]["left"].is_null());
  CHECK(decode_tree(doc).same_as(t));
  CHECK(encode_tree(Tree()).is_null());
  CHECK(decode_tree(Json(nullptr)).empty());
}

TEST_CASE("decoder rejects malformed documents") {
  CHECK(decode_error(R"({"key": 1})") == ErrorCode::MalformedDocument);
  CHECK(decode_error(R"({"key": "1", "color": "B"})") == ErrorCode::MalformedDocument);
  CHECK(decode_error(R"({"key": 1, "color": "DB"})") == ErrorCode::MalformedDocument);
  CHECK(decode_error(R"({"key": 1, "color": "B", "left": {"key": 1, "color": "R"}})") ==
        ErrorCode::MalformedDocument);
  CHECK(decode_error("[1,2]") == ErrorCode::MalformedDocument);
}

TEST_CASE("decoded trees are not validated") {
  Tree t = decode_tree(Json::parse(R"({"key": 1, "color": "R"})"));
  CHECK_FALSE(t.valid());
}
