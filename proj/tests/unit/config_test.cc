#include "framekit/model/config.h"

#include "doctest.h"
#include "framekit/error.h"

using namespace framekit;

TEST_CASE("defaults") {
  ModelConfig c;
  CHECK(c.word_dim == 32);
  CHECK(c.lstm_dim == 256);
  CHECK(c.hidden_dim == 128);
  CHECK(c.max_affix == 3);
  CHECK(c.k_attention == 5);
  CHECK(c.k_history == 5);
  CHECK(c.learning_rate == 0.0005);
  CHECK(c.adam_beta1 == 0.01);
  CHECK(c.adam_beta2 == 0.999);
  CHECK(c.adam_epsilon == 1e-5);
  CHECK(c.gradient_clip_norm == 1.0);
  CHECK(c.batch_size == 8);
  CHECK(c.ema_decay == 0.0);
  CHECK(c.max_actions_per_token == 32);
  CHECK(c.activation == Activation::kRelu);
  CHECK_NOTHROW(c.Validate());
}

TEST_CASE("set and json round trip") {
  ModelConfig c;
  c.Apply({"lstm_dim=64", "hidden_dim=32", "learning_rate=0.001", "activation=tanh",
           "adam_beta1=0.9"});
  CHECK(c.lstm_dim == 64);
  CHECK(c.hidden_dim == 32);
  CHECK(c.learning_rate == 0.001);
  CHECK(c.activation == Activation::kTanh);
  ModelConfig back = ModelConfig::FromJson(c.ToJson());
  CHECK(back.ToJson() == c.ToJson());
  CHECK(back.adam_beta1 == 0.9);
  for (const std::string &key : ModelConfig::Keys()) {
    CHECK(c.ToJson().find("\"" + key + "\"") != std::string::npos);
  }
}

TEST_CASE("invalid settings") {
  ModelConfig c;
  CHECK_THROWS_AS(c.Set("no_such_key", "1"), Error);
  CHECK_THROWS_AS(c.Set("lstm_dim", "abc"), Error);
  CHECK_THROWS_AS(c.Set("activation", "sigmoid"), Error);
  CHECK_THROWS_AS(c.Apply({"lstm_dim"}), Error);
  CHECK(c.lstm_dim == 256);
  CHECK_THROWS_AS(ModelConfig::FromJson("{\"lstm_dim\": 0}"), Error);
  CHECK_THROWS_AS(ModelConfig::FromJson("not json"), Error);
  CHECK_THROWS_AS(ModelConfig::FromJson("[1]"), Error);

  for (const char *bad : {"lstm_dim=0", "adam_beta1=1", "learning_rate=-1",
                          "adam_epsilon=0", "ema_decay=1", "batch_size=0"}) {
    ModelConfig d;
    d.Apply({bad});
    CHECK_THROWS_AS(d.Validate(), Error);
  }
}
