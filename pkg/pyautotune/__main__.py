import pyautotune.cli
pyautotune.cli.main()
