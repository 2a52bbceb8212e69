#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "uavsim/ddpg.hpp"

using namespace uavsim;

namespace {

Transition marked(double mark) {
    Transition t;
    t.reward.r_dc = mark;
    return t;
}

Hyper small_hyper() {
    Hyper h;
    h.actor_hidden = {8, 8};
    h.critic_hidden = {8};
    h.replay_capacity = 16;
    h.batch_size = 4;
    return h;
}

std::vector<Transition> random_batch(int n, Rng& rng) {
    std::vector<Transition> batch;
    for (int i = 0; i < n; ++i) {
        Transition t;
        for (double& v : t.obs) v = rng.uniform(-1.0, 1.0);
        for (double& v : t.next_obs) v = rng.uniform(-1.0, 1.0);
        t.action = {rng.uniform(0.0, 1.0), rng.uniform(-1.0, 1.0)};
        t.reward.r_dc = rng.uniform(0.0, 5.0);
        t.reward.r_ec = rng.uniform(-200.0, -100.0);
        t.reward.r_aux = rng.uniform(-2.0, 0.0);
        t.done = (i % 4 == 3);
        batch.push_back(t);
    }
    return batch;
}

} // namespace

TEST_CASE("scalarization is the weighted sum") {
    RewardVector r{5.0, 70.0, -168.49, -3.0};
    WeightVector w{100.0, 1.0, 1.0, 1.0};
    CHECK(scalarize(r, w) == 398.51);
    WeightVector unit;
    CHECK(scalarize(r, unit) == doctest::Approx(5.0 + 70.0 - 168.49 - 3.0).epsilon(1e-15));
}

TEST_CASE("replay keeps the newest transitions once full") {
    ReplayBuffer buf(3);
    CHECK(!buf.full());
    buf.store(marked(1));
    buf.store(marked(2));
    buf.store(marked(3));
    CHECK(buf.full());
    CHECK(buf.cursor() == 0);
    buf.store(marked(4)); // evicts the oldest
    CHECK(buf.size() == 3);
    CHECK(buf.data()[0].reward.r_dc == 4.0);
    CHECK(buf.data()[1].reward.r_dc == 2.0);
    CHECK(buf.data()[2].reward.r_dc == 3.0);
    CHECK(buf.cursor() == 1);
    buf.store(marked(5));
    CHECK(buf.data()[1].reward.r_dc == 5.0);
    CHECK(buf.cursor() == 2);
}

TEST_CASE("replay refuses to sample before it is full") {
    ReplayBuffer buf(8);
    Rng rng(1);
    for (int i = 0; i < 7; ++i) buf.store(marked(i));
    CHECK_THROWS_AS(buf.sample(4, rng), std::logic_error);
    buf.store(marked(7));
    const std::vector<Transition> batch = buf.sample(4, rng);
    CHECK(batch.size() == 4);
}

TEST_CASE("replay constructor and sample argument checks") {
    CHECK_THROWS_AS(ReplayBuffer(0), std::invalid_argument);
    ReplayBuffer buf(2);
    buf.store(marked(0));
    buf.store(marked(1));
    Rng rng(1);
    CHECK_THROWS_AS(buf.sample(0, rng), std::invalid_argument);
}

TEST_CASE("replay sampling is near uniform") {
    const int cap = 100;
    ReplayBuffer buf(cap);
    for (int i = 0; i < cap; ++i) buf.store(marked(i));
    Rng rng(73);
    std::vector<int> counts(cap, 0);
    const int n = 100000;
    const std::vector<Transition> batch = buf.sample(n, rng);
    for (const Transition& t : batch)
        ++counts[static_cast<std::size_t>(t.reward.r_dc)];
    const double expected = static_cast<double>(n) / cap;
    double chi2 = 0.0;
    for (int c : counts) {
        const double d = c - expected;
        chi2 += d * d / expected;
    }
    // 99th percentile of chi-square with 99 degrees of freedom
    CHECK(chi2 < 134.64161685578915);
}

TEST_CASE("noise schedule decays multiplicatively to its floor") {
    NoiseSchedule n;
    CHECK(n.stddev() == doctest::Approx(std::sqrt(0.9999 * 2.0)).epsilon(1e-15));
    n.step();
    CHECK(n.epsilon == doctest::Approx(0.9999 * 0.9999).epsilon(1e-15));
    n.epsilon = 0.0100001;
    n.step();
    CHECK(n.epsilon == 0.01);
    n.step();
    CHECK(n.epsilon == 0.01);
}

TEST_CASE("noise schedule validation") {
    NoiseSchedule n;
    n.sigma2 = 0.0;
    CHECK_THROWS_AS(n.validate(), std::invalid_argument);
    NoiseSchedule n2;
    n2.epsilon = 1.5;
    CHECK_THROWS_AS(n2.validate(), std::invalid_argument);
    NoiseSchedule n3;
    n3.decay = 0.0;
    CHECK_THROWS_AS(n3.validate(), std::invalid_argument);
}

TEST_CASE("head squashes raw outputs into the command ranges") {
    const auto head = actor_head({0.0, 0.0});
    CHECK(head[0] == 0.5);
    CHECK(head[1] == 0.0);
    const auto hi = actor_head({50.0, 50.0});
    CHECK(hi[0] > 0.999999);
    CHECK(hi[1] > 0.999999);
    CHECK_THROWS_AS(actor_head({1.0}), std::invalid_argument);
}

TEST_CASE("head maps to speed and heading") {
    const Vec2 fwd = head_to_env({1.0, 0.0}, 20.0);
    CHECK(fwd.x == 20.0);
    CHECK(fwd.y == 0.0);
    const Vec2 back = head_to_env({1.0, 1.0}, 20.0);
    CHECK(back.x == doctest::Approx(-20.0).epsilon(1e-15));
    CHECK(std::abs(back.y) < 1e-13);
    const Vec2 down = head_to_env({0.5, -0.5}, 20.0);
    CHECK(std::abs(down.x) < 1e-13);
    CHECK(down.y == doctest::Approx(-10.0).epsilon(1e-15));
    const Vec2 still = head_to_env({0.0, 0.3}, 20.0);
    CHECK(still.norm() == 0.0);
}

TEST_CASE("agent bundle wires the expected topology") {
    Rng rng(79);
    const AgentBundle bundle = AgentBundle::create(small_hyper(), rng);
    CHECK(bundle.actor.sizes() == std::vector<int>{6, 8, 8, 2});
    CHECK(bundle.critic.sizes() == std::vector<int>{8, 8, 1});
    // targets start as exact copies
    for (std::size_t l = 0; l < bundle.actor.layers.size(); ++l)
        CHECK(bundle.actor.layers[l].w == bundle.target_actor.layers[l].w);
    for (std::size_t l = 0; l < bundle.critic.layers.size(); ++l)
        CHECK(bundle.critic.layers[l].w == bundle.target_critic.layers[l].w);
    CHECK(bundle.actor_opt.lr == small_hyper().lr_actor);
}

TEST_CASE("greedy action selection is pure") {
    Rng init_rng(83);
    const AgentBundle bundle = AgentBundle::create(small_hyper(), init_rng);
    NoiseSchedule noise;
    Rng rng(5);
    const std::string state_before = rng.save_state();
    const std::array<double, kObsDim> obs{0.1, -0.2, 0.5, 0.5, 0.0, 0.0};
    const ActionChoice choice = select_action(bundle.actor, obs, noise, rng, false, 20.0);
    CHECK(rng.save_state() == state_before); // no randomness consumed
    CHECK(noise.epsilon == 0.9999);          // no decay either
    const auto expect =
        actor_head(bundle.actor.predict(std::vector<double>(obs.begin(), obs.end())));
    CHECK(choice.head[0] == expect[0]);
    CHECK(choice.head[1] == expect[1]);
    const Vec2 env_action = head_to_env(expect, 20.0);
    CHECK(choice.env_action.x == env_action.x);
    CHECK(choice.env_action.y == env_action.y);
}

TEST_CASE("exploration noise has the scheduled spread") {
    // zero-weight actor pins the head at (0.5, 0); tiny sigma avoids clipping
    Mlp actor;
    Layer l;
    l.fan_in = kObsDim;
    l.fan_out = kActionDim;
    l.w.assign(static_cast<std::size_t>(kObsDim * kActionDim), 0.0);
    l.b = {0.0, 0.0};
    l.act = Act::linear;
    actor.layers = {l};

    NoiseSchedule noise;
    noise.sigma2 = 1e-4;
    noise.epsilon = 1.0;
    noise.decay = 1.0;
    Rng rng(89);
    const std::array<double, kObsDim> obs{};
    const int n = 10000;
    double sum_u = 0.0, sq_u = 0.0;
    for (int i = 0; i < n; ++i) {
        const ActionChoice c = select_action(actor, obs, noise, rng, true, 20.0);
        CHECK(c.head[0] >= 0.0);
        CHECK(c.head[0] <= 1.0);
        CHECK(c.head[1] >= -1.0);
        CHECK(c.head[1] <= 1.0);
        sum_u += c.head[0];
        sq_u += c.head[0] * c.head[0];
    }
    const double mean = sum_u / n;
    const double std = std::sqrt(sq_u / n - mean * mean);
    CHECK(std::abs(mean - 0.5) < 0.001);
    CHECK(std::abs(std - 0.01) < 0.001); // stddev = sqrt(eps * sigma2) = 0.01
}

TEST_CASE("exploring selection decays the schedule once per call") {
    Rng init_rng(97);
    const AgentBundle bundle = AgentBundle::create(small_hyper(), init_rng);
    NoiseSchedule noise;
    Rng rng(7);
    const std::array<double, kObsDim> obs{};
    select_action(bundle.actor, obs, noise, rng, true, 20.0);
    CHECK(noise.epsilon == doctest::Approx(0.9999 * 0.9999).epsilon(1e-15));
}

TEST_CASE("critic input is the observation-action concatenation") {
    const std::array<double, kObsDim> obs{1, 2, 3, 4, 5, 6};
    const std::array<double, kActionDim> act{7, 8};
    CHECK(critic_input(obs, act) == std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8});
}

TEST_CASE("critic targets bootstrap through the target networks") {
    Rng rng(101);
    AgentBundle bundle = AgentBundle::create(small_hyper(), rng);
    Rng batch_rng(103);
    const std::vector<Transition> batch = random_batch(5, batch_rng);
    const WeightVector w{100.0, 1.0, 1.0, 1.0};
    const std::vector<double> ys = critic_target_values(batch, bundle, w);
    REQUIRE(ys.size() == batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        double expect = scalarize(batch[i].reward, w);
        if (!batch[i].done) {
            const auto raw = bundle.target_actor.predict(
                std::vector<double>(batch[i].next_obs.begin(), batch[i].next_obs.end()));
            const auto head = actor_head(raw);
            expect += bundle.gamma *
                      bundle.target_critic.predict(critic_input(batch[i].next_obs, head))[0];
        }
        CHECK(ys[i] == expect);
    }
    // terminal transitions must not bootstrap
    CHECK(batch[3].done);
    CHECK(ys[3] == scalarize(batch[3].reward, w));
}

TEST_CASE("a perfectly predicted batch leaves the critic untouched") {
    Rng rng(107);
    AgentBundle bundle = AgentBundle::create(small_hyper(), rng);
    WeightVector w{0.0, 0.0, 0.0, 1.0};
    Rng batch_rng(109);
    std::vector<Transition> batch = random_batch(4, batch_rng);
    for (Transition& t : batch) {
        t.done = true; // no bootstrap term
        t.reward.r_dc = 0.0;
        t.reward.r_eh = 0.0;
        t.reward.r_ec = 0.0;
        t.reward.r_aux = bundle.critic.predict(critic_input(t.obs, t.action))[0];
    }
    const std::vector<double> w_before = bundle.critic.layers[0].w;
    const double loss = update_critic(bundle, batch, w);
    CHECK(loss == 0.0);
    CHECK(bundle.critic.layers[0].w == w_before);
}

TEST_CASE("critic regression loss falls on a fixed batch") {
    Rng rng(113);
    AgentBundle bundle = AgentBundle::create(small_hyper(), rng);
    bundle.critic_opt.lr = 0.02; // reach O(1) targets within the test budget
    Rng batch_rng(127);
    std::vector<Transition> batch = random_batch(8, batch_rng);
    for (Transition& t : batch) {
        t.reward.r_ec = t.reward.r_ec / 100.0;
        t.reward.r_dc = t.reward.r_dc / 5.0;
    }
    const WeightVector w;
    const double first = update_critic(bundle, batch, w);
    double last = first;
    for (int i = 0; i < 500; ++i) last = update_critic(bundle, batch, w);
    CHECK(first > 0.0);
    CHECK(last < first);
    CHECK(last < 0.05 * first);
}

TEST_CASE("actor updates climb the critic and leave it unchanged") {
    Rng rng(131);
    AgentBundle bundle = AgentBundle::create(small_hyper(), rng);
    Rng batch_rng(137);
    const std::vector<Transition> batch = random_batch(8, batch_rng);
    // shape the critic a little first so its landscape is non-trivial
    const WeightVector w;
    for (int i = 0; i < 20; ++i) update_critic(bundle, batch, w);

    const std::vector<double> critic_w = bundle.critic.layers[0].w;
    const double before = update_actor(bundle, batch);
    double after = before;
    for (int i = 0; i < 100; ++i) after = update_actor(bundle, batch);
    CHECK(after > before);
    CHECK(bundle.critic.layers[0].w == critic_w); // actor step never edits the critic
}

TEST_CASE("soft update blends and converges geometrically") {
    Rng rng(139);
    Mlp main = Mlp::init({4, 8, 2}, {Act::relu, Act::linear}, rng);
    Mlp target = Mlp::init({4, 8, 2}, {Act::relu, Act::linear}, rng);

    Mlp blended = target;
    soft_update(main, blended, 0.25);
    CHECK(blended.layers[0].w[0] ==
          doctest::Approx(0.25 * main.layers[0].w[0] + 0.75 * target.layers[0].w[0])
              .epsilon(1e-15));

    // tau = 1 snaps to the main network
    Mlp snap = target;
    soft_update(main, snap, 1.0);
    CHECK(snap.layers[0].w == main.layers[0].w);
    CHECK(snap.layers[1].b == main.layers[1].b);

    // n blends shrink the gap by (1 - tau)^n
    const double tau = 0.005;
    const double gap0 = target.layers[0].w[3] - main.layers[0].w[3];
    Mlp track = target;
    for (int i = 0; i < 50; ++i) soft_update(main, track, tau);
    const double expect = main.layers[0].w[3] + std::pow(1.0 - tau, 50) * gap0;
    CHECK(track.layers[0].w[3] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("soft update rejects mismatched shapes") {
    Rng rng(149);
    const Mlp main = Mlp::init({4, 8, 2}, {Act::relu, Act::linear}, rng);
    Mlp wrong = Mlp::init({4, 6, 2}, {Act::relu, Act::linear}, rng);
    CHECK_THROWS_AS(soft_update(main, wrong, 0.5), std::invalid_argument);
}

TEST_CASE("hyperparameter validation") {
    Hyper h = small_hyper();
    h.gamma = 1.5;
    CHECK_THROWS_AS(h.validate(), std::invalid_argument);
    Hyper h2 = small_hyper();
    h2.tau = 0.0;
    CHECK_THROWS_AS(h2.validate(), std::invalid_argument);
    Hyper h3 = small_hyper();
    h3.actor_hidden.clear();
    CHECK_THROWS_AS(h3.validate(), std::invalid_argument);
    Hyper h4 = small_hyper();
    h4.batch_size = 0;
    CHECK_THROWS_AS(h4.validate(), std::invalid_argument);
}
