#include "mlgen/model.hpp"
#include "mlgen/model_io.hpp"

#include "support/io.hpp"

#include <doctest.h>

#include <string>
#include <vector>

using namespace mlgen;

namespace {

// A compact inheritance fixture: D inherits B and C, which both inherit A.
// A defines `p`; C redefines it with a different default.
const char* kDiamond = R"({
  "stereotypes": [
    {"name": "ML", "kind": "ml-task"},
    {"name": "A", "kind": "ml-task", "parents": ["ML"],
     "properties": [{"name": "p", "type": "string", "default": "from-a"},
                    {"name": "a_only", "type": "number", "default": 1}]},
    {"name": "B", "kind": "ml-task", "parents": ["A"],
     "properties": [{"name": "b_only", "type": "boolean", "default": true}]},
    {"name": "C", "kind": "ml-task", "parents": ["A"],
     "properties": [{"name": "p", "type": "string", "default": "from-c"}]},
    {"name": "D", "kind": "ml-task", "parents": ["B", "C"],
     "properties": [{"name": "d_only", "type": "string", "default": "d"}]}
  ],
  "blocks": [
    {"qualifiedName": "P::X", "appliedStereotypes": [{"stereotype": "D", "values": {"b_only": false}}]}
  ],
  "stateMachines": [
    {"name": "M", "states": [{"name": "only", "order": 0, "block": "P::X"}]}
  ]
})";

}  // namespace

TEST_CASE("weather fixture loads with all sections linked") {
    Model model = load_model(testsupport::read_fixture("weather/weather.model.json"));

    CHECK(model.blocks().size() == 6);
    CHECK(model.stereotypes().size() == 8);
    REQUIRE(model.state_machines().size() == 1);

    const StateMachine& machine = model.state_machines().front();
    CHECK(machine.name == "Weather_Pipeline");
    REQUIRE(machine.states.size() == 5);
    for (std::size_t i = 1; i < machine.states.size(); ++i) {
        CHECK(machine.states[i - 1].order < machine.states[i].order);
    }
    CHECK(machine.states.front().block.str() == "Weather::Sensor_Log");
    CHECK(machine.states.back().block.str() == "Weather::Train_Model");

    const Block& split = model.block(QualifiedName::parse("Weather::TrainSplit"));
    CHECK(split.name == "TrainSplit");
    REQUIRE(split.parts.size() == 1);
    CHECK(split.parts.front().str() == "Weather::Merge_DF");

    // Applied values keep their numeric flavour.
    const AttributeValue* testSize = split.appliedStereotypes.front().find("Test_Size");
    REQUIRE(testSize != nullptr);
    CHECK(testSize->primitive().render() == "0.2");
}

TEST_CASE("state order drives machine layout regardless of document order") {
    const char* text = R"({
      "stereotypes": [{"name": "ML", "kind": "ml-task"}],
      "blocks": [
        {"qualifiedName": "P::A", "appliedStereotypes": [{"stereotype": "ML"}]},
        {"qualifiedName": "P::B", "appliedStereotypes": [{"stereotype": "ML"}]}
      ],
      "stateMachines": [
        {"name": "M", "states": [
          {"name": "second", "order": 7, "block": "P::B"},
          {"name": "first", "order": 2, "block": "P::A"}
        ]}
      ]
    })";
    Model model = load_model(text);
    const StateMachine& machine = model.state_machines().front();
    CHECK(machine.states[0].name == "first");
    CHECK(machine.states[1].name == "second");
}

TEST_CASE("diamond inheritance: each ancestor appears once, derived redefinition wins") {
    Model model = load_model(kDiamond);

    std::vector<std::string> order;
    for (const StereotypeDef* def : model.linearize("D")) order.push_back(def->name);
    CHECK(order == std::vector<std::string>{"ML", "A", "B", "C", "D"});

    CHECK(model.inherits_from("D", "ML"));
    CHECK(model.inherits_from("D", "A"));
    CHECK_FALSE(model.inherits_from("B", "C"));

    const Block& block = model.block(QualifiedName::parse("P::X"));
    auto effective = effective_properties(model, block, "D");
    REQUIRE(effective.size() == 4);

    // `p` keeps its first-definition position but carries C's redefinition.
    CHECK(effective[0].def.name == "p");
    CHECK(effective[0].owner == "C");
    REQUIRE(effective[0].def.defaultValue.has_value());
    CHECK(effective[0].def.defaultValue->render() == "from-c");

    CHECK(effective[1].def.name == "a_only");
    CHECK(effective[2].def.name == "b_only");
    CHECK(effective[3].def.name == "d_only");

    // Assigned values land on the matching property.
    REQUIRE(effective[2].assigned.has_value());
    CHECK(effective[2].assigned->primitive().render() == "False");
    CHECK_FALSE(effective[0].assigned.has_value());
}

TEST_CASE("effective_properties refuses stereotypes the block does not apply") {
    Model model = load_model(kDiamond);
    const Block& block = model.block(QualifiedName::parse("P::X"));
    CHECK_THROWS_WITH_AS(effective_properties(model, block, "B"),
                         "stereotype 'B' is not applied to block 'P::X'", ModelError);
}

TEST_CASE("connected_inputs resolves parts in declaration order") {
    Model model = load_model(testsupport::read_fixture("weather/weather.model.json"));
    const Block& merge = model.block(QualifiedName::parse("Weather::Merge_DF"));
    auto inputs = connected_inputs(model, merge);
    REQUIRE(inputs.size() == 2);
    CHECK(inputs[0]->name == "Format_Date");
    CHECK(inputs[1]->name == "Station_Info");
}

TEST_CASE("inheritance cycles are reported with the cycle path") {
    const char* text = R"({
      "stereotypes": [
        {"name": "ML", "kind": "ml-task"},
        {"name": "A", "kind": "ml-task", "parents": ["B"]},
        {"name": "B", "kind": "ml-task", "parents": ["A"]}
      ],
      "blocks": [],
      "stateMachines": []
    })";
    CHECK_THROWS_WITH_AS(load_model(text), "stereotype inheritance cycle: A -> B -> A",
                         ModelError);
}

TEST_CASE("part-of cycles are rejected at load") {
    const char* text = R"({
      "stereotypes": [{"name": "ML", "kind": "ml-task"}],
      "blocks": [
        {"qualifiedName": "P::A", "appliedStereotypes": [{"stereotype": "ML"}], "parts": ["P::B"]},
        {"qualifiedName": "P::B", "appliedStereotypes": [{"stereotype": "ML"}], "parts": ["P::A"]}
      ],
      "stateMachines": []
    })";
    CHECK_THROWS_AS(load_model(text), ModelError);
    try {
        load_model(text);
    } catch (const ModelError& error) {
        CHECK(std::string(error.what()).find("part-of cycle") != std::string::npos);
    }
}

TEST_CASE("unresolved part references name both ends") {
    const char* text = R"({
      "stereotypes": [{"name": "ML", "kind": "ml-task"}],
      "blocks": [
        {"qualifiedName": "P::A", "appliedStereotypes": [{"stereotype": "ML"}], "parts": ["Q::Missing"]}
      ],
      "stateMachines": []
    })";
    try {
        load_model(text);
        FAIL("expected ModelError");
    } catch (const ModelError& error) {
        const std::string what = error.what();
        CHECK(what.find("Q::Missing") != std::string::npos);
        CHECK(what.find("P::A") != std::string::npos);
    }
}

TEST_CASE("task stereotypes must descend from the ML root") {
    const char* text = R"({
      "stereotypes": [
        {"name": "ML", "kind": "ml-task"},
        {"name": "Orphan", "kind": "ml-task"}
      ],
      "blocks": [],
      "stateMachines": []
    })";
    CHECK_THROWS_WITH_AS(
        load_model(text),
        "ml-task stereotype 'Orphan' does not inherit from the root stereotype 'ML'",
        ModelError);
}

TEST_CASE("duplicate qualified names are rejected") {
    const char* text = R"({
      "stereotypes": [{"name": "ML", "kind": "ml-task"}],
      "blocks": [
        {"qualifiedName": "P::A", "appliedStereotypes": [{"stereotype": "ML"}]},
        {"qualifiedName": "P::A", "appliedStereotypes": [{"stereotype": "ML"}]}
      ],
      "stateMachines": []
    })";
    CHECK_THROWS_AS(load_model(text), ModelError);
}

TEST_CASE("duplicate state orders within a machine are rejected") {
    const char* text = R"({
      "stereotypes": [{"name": "ML", "kind": "ml-task"}],
      "blocks": [
        {"qualifiedName": "P::A", "appliedStereotypes": [{"stereotype": "ML"}]},
        {"qualifiedName": "P::B", "appliedStereotypes": [{"stereotype": "ML"}]}
      ],
      "stateMachines": [
        {"name": "M", "states": [
          {"name": "x", "order": 1, "block": "P::A"},
          {"name": "y", "order": 1, "block": "P::B"}
        ]}
      ]
    })";
    CHECK_THROWS_AS(load_model(text), ModelError);
}

TEST_CASE("an attribute carries exactly one of value or ref") {
    const char* both = R"({
      "stereotypes": [{"name": "ML", "kind": "ml-task"}],
      "blocks": [
        {"qualifiedName": "P::A", "appliedStereotypes": [{"stereotype": "ML"}],
         "attributes": [{"name": "x", "value": 1, "ref": "P::A"}]}
      ],
      "stateMachines": []
    })";
    CHECK_THROWS_AS(load_model(both), Error);

    const char* neither = R"({
      "stereotypes": [{"name": "ML", "kind": "ml-task"}],
      "blocks": [
        {"qualifiedName": "P::A", "appliedStereotypes": [{"stereotype": "ML"}],
         "attributes": [{"name": "x"}]}
      ],
      "stateMachines": []
    })";
    CHECK_THROWS_AS(load_model(neither), Error);
}

TEST_CASE("applied property names must exist somewhere on the inheritance chain") {
    const char* text = R"({
      "stereotypes": [
        {"name": "ML", "kind": "ml-task"},
        {"name": "S", "kind": "ml-task", "parents": ["ML"], "properties": [{"name": "Known", "type": "string"}]}
      ],
      "blocks": [
        {"qualifiedName": "P::A",
         "appliedStereotypes": [{"stereotype": "S", "values": {"Unknown": "x"}}]}
      ],
      "stateMachines": []
    })";
    CHECK_THROWS_WITH_AS(
        load_model(text),
        "property 'Unknown' is not defined on stereotype 'S' or its ancestors (block 'P::A')",
        ModelError);
}

TEST_CASE("a mandatory property cannot also declare a default") {
    const char* text = R"({
      "stereotypes": [
        {"name": "ML", "kind": "ml-task"},
        {"name": "S", "kind": "ml-task", "parents": ["ML"],
         "properties": [{"name": "P", "type": "string", "mandatory": true, "default": "x"}]}
      ],
      "blocks": [],
      "stateMachines": []
    })";
    CHECK_THROWS_AS(load_model(text), Error);
}

TEST_CASE("save/load round trip is structurally stable") {
    const std::string original = testsupport::read_fixture("weather/weather.model.json");
    Model first = load_model(original);
    std::string saved = save_model(first);
    Model second = load_model(saved);

    CHECK(saved == save_model(second));
    CHECK(first.blocks().size() == second.blocks().size());
    REQUIRE(first.blocks().size() == second.blocks().size());
    for (std::size_t i = 0; i < first.blocks().size(); ++i) {
        CHECK(first.blocks()[i] == second.blocks()[i]);
    }
    CHECK(first.stereotypes() == second.stereotypes());
    CHECK(first.state_machines() == second.state_machines());
}

TEST_CASE("primitive rendering: numbers, booleans, text") {
    CHECK(Primitive{0.2}.render() == "0.2");
    CHECK(Primitive{2.0}.render() == "2");
    CHECK(Primitive{std::int64_t{42}}.render() == "42");
    CHECK(Primitive{std::int64_t{-7}}.render() == "-7");
    CHECK(Primitive{true}.render() == "True");
    CHECK(Primitive{false}.render() == "False");
    CHECK(Primitive{std::string("./weather.csv")}.render() == "./weather.csv");
    CHECK(Primitive{1e21}.render() == "1e+21");
}
