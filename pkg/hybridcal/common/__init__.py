from ._scenario import ReceiverScenario
