from kreincalc.main import main

main()
